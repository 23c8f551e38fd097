#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "sod/core/grid.hpp"
#include "sod/core/rng.hpp"

namespace sod {

// Interleaved 8-bit RGB.
struct ImageRgb {
  int h = 0, w = 0;
  std::vector<uint8_t> px;  // 3 * h * w

  ImageRgb() = default;
  ImageRgb(int h_, int w_) : h(h_), w(w_), px(static_cast<size_t>(h_) * w_ * 3, 0) {}

  uint8_t* at(int y, int x) { return px.data() + (static_cast<size_t>(y) * w + x) * 3; }
  const uint8_t* at(int y, int x) const {
    return px.data() + (static_cast<size_t>(y) * w + x) * 3;
  }

  void set(int y, int x, std::array<uint8_t, 3> c) {
    uint8_t* p = at(y, x);
    p[0] = c[0];
    p[1] = c[1];
    p[2] = c[2];
  }

  ImageRgb flipped_h() const {
    ImageRgb out(h, w);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        const uint8_t* s = at(y, w - 1 - x);
        out.set(y, x, {s[0], s[1], s[2]});
      }
    return out;
  }
};

// Content hash over dimensions and raw pixels; the mock captioner keys its
// fixture table on this.
inline uint64_t content_hash(const ImageRgb& img) {
  uint64_t h = fnv1a64(&img.w, sizeof img.w);
  h = fnv1a64(&img.h, sizeof img.h, h);
  return fnv1a64(img.px.data(), img.px.size(), h);
}

ImageRgb resize_bilinear(const ImageRgb& src, int out_h, int out_w);
RealGrid resize_bilinear(const RealGrid& src, int out_h, int out_w);
BinaryGrid resize_nearest(const BinaryGrid& src, int out_h, int out_w);

}  // namespace sod
