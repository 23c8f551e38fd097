#pragma once

#include <cstdint>
#include <vector>

#include "sod/core/error.hpp"

namespace sod {

// H x W mask with values in {0, 1}.
struct BinaryGrid {
  int h = 0, w = 0;
  std::vector<uint8_t> v;

  BinaryGrid() = default;
  BinaryGrid(int h_, int w_) : h(h_), w(w_), v(static_cast<size_t>(h_) * w_, 0) {
    if (h_ < 0 || w_ < 0) throw ValueError("BinaryGrid: negative dimensions");
  }

  uint8_t& at(int y, int x) { return v[static_cast<size_t>(y) * w + x]; }
  uint8_t at(int y, int x) const { return v[static_cast<size_t>(y) * w + x]; }

  size_t count_ones() const {
    size_t n = 0;
    for (uint8_t b : v) n += b != 0;
    return n;
  }

  bool same_shape(const BinaryGrid& o) const { return h == o.h && w == o.w; }
  bool operator==(const BinaryGrid& o) const = default;

  BinaryGrid flipped_h() const {
    BinaryGrid out(h, w);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) out.at(y, x) = at(y, w - 1 - x);
    return out;
  }
};

// H x W real-valued grid; SaliencyMap constrains values to [0, 1].
struct RealGrid {
  int h = 0, w = 0;
  std::vector<double> v;

  RealGrid() = default;
  RealGrid(int h_, int w_, double fill = 0.0)
      : h(h_), w(w_), v(static_cast<size_t>(h_) * w_, fill) {
    if (h_ < 0 || w_ < 0) throw ValueError("RealGrid: negative dimensions");
  }

  double& at(int y, int x) { return v[static_cast<size_t>(y) * w + x]; }
  double at(int y, int x) const { return v[static_cast<size_t>(y) * w + x]; }

  bool same_shape(const RealGrid& o) const { return h == o.h && w == o.w; }

  RealGrid flipped_h() const {
    RealGrid out(h, w);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) out.at(y, x) = at(y, w - 1 - x);
    return out;
  }
};

}  // namespace sod
