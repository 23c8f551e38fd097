#include "sod/core/image.hpp"

#include <algorithm>
#include <cmath>

namespace sod {
namespace {

// Half-pixel-center source coordinate, clamped to the valid range.
struct Lerp {
  int lo, hi;
  double t;
};

Lerp lerp_coord(int out_i, int out_n, int in_n) {
  double src = (out_i + 0.5) * static_cast<double>(in_n) / out_n - 0.5;
  src = std::clamp(src, 0.0, static_cast<double>(in_n - 1));
  const int lo = static_cast<int>(std::floor(src));
  const int hi = std::min(lo + 1, in_n - 1);
  return {lo, hi, src - lo};
}

}  // namespace

ImageRgb resize_bilinear(const ImageRgb& src, int out_h, int out_w) {
  ImageRgb out(out_h, out_w);
  for (int y = 0; y < out_h; ++y) {
    const Lerp ly = lerp_coord(y, out_h, src.h);
    for (int x = 0; x < out_w; ++x) {
      const Lerp lx = lerp_coord(x, out_w, src.w);
      for (int c = 0; c < 3; ++c) {
        const double v00 = src.at(ly.lo, lx.lo)[c];
        const double v01 = src.at(ly.lo, lx.hi)[c];
        const double v10 = src.at(ly.hi, lx.lo)[c];
        const double v11 = src.at(ly.hi, lx.hi)[c];
        const double v = (1 - ly.t) * ((1 - lx.t) * v00 + lx.t * v01) +
                         ly.t * ((1 - lx.t) * v10 + lx.t * v11);
        out.at(y, x)[c] = static_cast<uint8_t>(std::lround(v));
      }
    }
  }
  return out;
}

RealGrid resize_bilinear(const RealGrid& src, int out_h, int out_w) {
  RealGrid out(out_h, out_w);
  for (int y = 0; y < out_h; ++y) {
    const Lerp ly = lerp_coord(y, out_h, src.h);
    for (int x = 0; x < out_w; ++x) {
      const Lerp lx = lerp_coord(x, out_w, src.w);
      const double v00 = src.at(ly.lo, lx.lo);
      const double v01 = src.at(ly.lo, lx.hi);
      const double v10 = src.at(ly.hi, lx.lo);
      const double v11 = src.at(ly.hi, lx.hi);
      out.at(y, x) = (1 - ly.t) * ((1 - lx.t) * v00 + lx.t * v01) +
                     ly.t * ((1 - lx.t) * v10 + lx.t * v11);
    }
  }
  return out;
}

BinaryGrid resize_nearest(const BinaryGrid& src, int out_h, int out_w) {
  BinaryGrid out(out_h, out_w);
  for (int y = 0; y < out_h; ++y) {
    int sy = std::min(static_cast<int>((y + 0.5) * src.h / out_h), src.h - 1);
    for (int x = 0; x < out_w; ++x) {
      int sx = std::min(static_cast<int>((x + 0.5) * src.w / out_w), src.w - 1);
      out.at(y, x) = src.at(sy, sx);
    }
  }
  return out;
}

}  // namespace sod
