#include "sod/loss/canny.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace sod::loss {
namespace {

constexpr double kSigma = 1.4;
constexpr double kLowRatio = 0.1;
constexpr double kHighRatio = 0.3;

std::vector<double> gaussian_kernel(double sigma, int& radius) {
  radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(static_cast<size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double v = std::exp(-0.5 * (i * i) / (sigma * sigma));
    k[static_cast<size_t>(i + radius)] = v;
    sum += v;
  }
  for (double& v : k) v /= sum;
  return k;
}

// Separable convolution with zero padding outside the image.
RealGrid gaussian_blur(const BinaryGrid& mask) {
  int radius = 0;
  const std::vector<double> k = gaussian_kernel(kSigma, radius);
  const int h = mask.h, w = mask.w;
  RealGrid tmp(h, w), out(h, w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double s = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        const int xx = x + i;
        if (xx < 0 || xx >= w) continue;
        s += k[static_cast<size_t>(i + radius)] * mask.at(y, xx);
      }
      tmp.at(y, x) = s;
    }
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double s = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        const int yy = y + i;
        if (yy < 0 || yy >= h) continue;
        s += k[static_cast<size_t>(i + radius)] * tmp.at(yy, x);
      }
      out.at(y, x) = s;
    }
  return out;
}

inline double px(const RealGrid& g, int y, int x) {
  if (y < 0 || y >= g.h || x < 0 || x >= g.w) return 0.0;
  return g.at(y, x);
}

}  // namespace

BinaryGrid canny_edges(const BinaryGrid& mask) {
  const int h = mask.h, w = mask.w;
  BinaryGrid edges(h, w);
  if (h == 0 || w == 0) return edges;

  const RealGrid smooth = gaussian_blur(mask);

  RealGrid mag(h, w), gx(h, w), gy(h, w);
  double max_mag = 0.0;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double dx = (px(smooth, y - 1, x + 1) + 2.0 * px(smooth, y, x + 1) +
                         px(smooth, y + 1, x + 1)) -
                        (px(smooth, y - 1, x - 1) + 2.0 * px(smooth, y, x - 1) +
                         px(smooth, y + 1, x - 1));
      const double dy = (px(smooth, y + 1, x - 1) + 2.0 * px(smooth, y + 1, x) +
                         px(smooth, y + 1, x + 1)) -
                        (px(smooth, y - 1, x - 1) + 2.0 * px(smooth, y - 1, x) +
                         px(smooth, y - 1, x + 1));
      gx.at(y, x) = dx;
      gy.at(y, x) = dy;
      const double m = std::hypot(dx, dy);
      mag.at(y, x) = m;
      max_mag = std::max(max_mag, m);
    }
  if (max_mag <= 0.0) return edges;  // flat input, no edges

  const double low = kLowRatio * max_mag;
  const double high = kHighRatio * max_mag;

  // Non-maximum suppression along the quantized gradient direction. Ties
  // (>=) keep both sides of a symmetric ridge so closed contours stay closed.
  BinaryGrid nms(h, w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double m = mag.at(y, x);
      if (m < low) continue;
      const double dx = gx.at(y, x), dy = gy.at(y, x);
      double angle = std::atan2(dy, dx) * 180.0 / M_PI;
      if (angle < 0) angle += 180.0;
      double m1, m2;
      if (angle < 22.5 || angle >= 157.5) {  // horizontal gradient
        m1 = px(mag, y, x - 1);
        m2 = px(mag, y, x + 1);
      } else if (angle < 67.5) {  // diagonal "/"
        m1 = px(mag, y - 1, x + 1);
        m2 = px(mag, y + 1, x - 1);
      } else if (angle < 112.5) {  // vertical gradient
        m1 = px(mag, y - 1, x);
        m2 = px(mag, y + 1, x);
      } else {  // diagonal "\"
        m1 = px(mag, y - 1, x - 1);
        m2 = px(mag, y + 1, x + 1);
      }
      if (m >= m1 && m >= m2) nms.at(y, x) = 1;
    }

  // Hysteresis: strong pixels seed an 8-connected flood through weak ones.
  std::vector<std::pair<int, int>> stack;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (nms.at(y, x) && mag.at(y, x) >= high) {
        edges.at(y, x) = 1;
        stack.emplace_back(y, x);
      }
  while (!stack.empty()) {
    const auto [y, x] = stack.back();
    stack.pop_back();
    for (int ddy = -1; ddy <= 1; ++ddy)
      for (int ddx = -1; ddx <= 1; ++ddx) {
        const int yy = y + ddy, xx = x + ddx;
        if (yy < 0 || yy >= h || xx < 0 || xx >= w) continue;
        if (edges.at(yy, xx) || !nms.at(yy, xx)) continue;
        if (mag.at(yy, xx) >= low) {
          edges.at(yy, xx) = 1;
          stack.emplace_back(yy, xx);
        }
      }
  }
  return edges;
}

EdgeMap edge_target(const PseudoLabel& label) {
  return EdgeMap{canny_edges(label.mask)};
}

BinaryGrid dilate(const BinaryGrid& mask, int radius) {
  const int h = mask.h, w = mask.w;
  BinaryGrid out(h, w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      if (!mask.at(y, x)) continue;
      const int y0 = std::max(0, y - radius), y1 = std::min(h - 1, y + radius);
      const int x0 = std::max(0, x - radius), x1 = std::min(w - 1, x + radius);
      for (int yy = y0; yy <= y1; ++yy)
        for (int xx = x0; xx <= x1; ++xx) out.at(yy, xx) = 1;
    }
  return out;
}

BinaryGrid erode(const BinaryGrid& mask, int radius) {
  const int h = mask.h, w = mask.w;
  BinaryGrid out(h, w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      bool all = true;
      for (int yy = y - radius; yy <= y + radius && all; ++yy)
        for (int xx = x - radius; xx <= x + radius && all; ++xx) {
          // outside the image counts as background
          if (yy < 0 || yy >= h || xx < 0 || xx >= w || !mask.at(yy, xx))
            all = false;
        }
      out.at(y, x) = all ? 1 : 0;
    }
  return out;
}

CertaintyMask certainty_mask(const BinaryGrid& mask, int band) {
  const BinaryGrid grown = dilate(mask, band);
  const BinaryGrid shrunk = erode(mask, band);
  BinaryGrid certain(mask.h, mask.w);
  for (size_t i = 0; i < mask.v.size(); ++i)
    certain.v[i] = (grown.v[i] != shrunk.v[i]) ? 0 : 1;
  return CertaintyMask{certain};
}

}  // namespace sod::loss
