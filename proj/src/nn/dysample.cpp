#include <algorithm>
#include <cmath>

#include "sod/kernels/kernels.hpp"
#include "sod/nn/layers.hpp"

namespace sod::nn {

using kern::ops;

namespace {

struct Sample {
  int y0, y1, x0, x1;
  double ty, tx;
  bool clamp_y, clamp_x;
};

inline void resolve_axis(double u, int n, int& lo, int& hi, double& t,
                         bool& clamped) {
  clamped = false;
  if (u <= 0.0) {
    u = 0.0;
    clamped = true;
  } else if (u >= n - 1) {
    u = n - 1;
    clamped = true;
  }
  lo = static_cast<int>(u);
  hi = std::min(lo + 1, n - 1);
  t = u - lo;
}

}  // namespace

DySample::DySample(std::string name, int channels, int scale, double scope)
    : c_(channels), scale_(scale), scope_(scope) {
  if (scale < 2) throw ValueError("DySample: scale must be >= 2");
  if (!(scope > 0.0)) throw ValueError("DySample: scope_factor must be > 0");
  // Zero init: the freshly constructed layer is plain bilinear upsampling.
  proj_w_ = Param(name + ".offset.weight", Tensor({2 * scale * scale, channels}));
  proj_b_ = Param(name + ".offset.bias", Tensor({2 * scale * scale}));
}

Tensor DySample::forward(const Tensor& x, bool train) {
  if (x.ndim() != 4 || x.dim(1) != c_) throw ValueError("DySample: bad input");
  const int n = x.dim(0), h = x.dim(2), w = x.dim(3);
  const int s = scale_, off_dim = 2 * s * s;
  const int oh = h * s, ow = w * s;
  const size_t plane = static_cast<size_t>(h) * w;
  Tensor y({n, c_, oh, ow});
  Tensor offs({off_dim, h * w});
  for (int i = 0; i < n; ++i) {
    const double* xi = x.data() + static_cast<size_t>(i) * c_ * plane;
    // offsets = W * x + b, one column per coarse cell
    ops().gemm_nn(off_dim, h * w, c_, 1.0, proj_w_.value.data(), c_, xi, h * w,
                  0.0, offs.data(), h * w);
    for (int d = 0; d < off_dim; ++d) {
      double* row = offs.data() + static_cast<size_t>(d) * plane;
      const double b = proj_b_.value[d];
      for (size_t p = 0; p < plane; ++p) row[p] += b;
    }
    for (int cy = 0; cy < h; ++cy) {
      for (int cx = 0; cx < w; ++cx) {
        const size_t cell = static_cast<size_t>(cy) * w + cx;
        for (int a = 0; a < s; ++a) {
          for (int b = 0; b < s; ++b) {
            const int p = a * s + b;
            const double dx = offs.data()[(2 * p) * plane + cell];
            const double dy = offs.data()[(2 * p + 1) * plane + cell];
            const double uy = cy + (a + 0.5) / s - 0.5 + scope_ * dy;
            const double ux = cx + (b + 0.5) / s - 0.5 + scope_ * dx;
            Sample sm;
            resolve_axis(uy, h, sm.y0, sm.y1, sm.ty, sm.clamp_y);
            resolve_axis(ux, w, sm.x0, sm.x1, sm.tx, sm.clamp_x);
            const int oy = cy * s + a, ox = cx * s + b;
            for (int ch = 0; ch < c_; ++ch) {
              const double* xp = xi + static_cast<size_t>(ch) * plane;
              const double v00 = xp[static_cast<size_t>(sm.y0) * w + sm.x0];
              const double v01 = xp[static_cast<size_t>(sm.y0) * w + sm.x1];
              const double v10 = xp[static_cast<size_t>(sm.y1) * w + sm.x0];
              const double v11 = xp[static_cast<size_t>(sm.y1) * w + sm.x1];
              y.at(i, ch, oy, ox) =
                  (1 - sm.ty) * ((1 - sm.tx) * v00 + sm.tx * v01) +
                  sm.ty * ((1 - sm.tx) * v10 + sm.tx * v11);
            }
          }
        }
      }
    }
  }
  if (train) x_ = x;
  return y;
}

Tensor DySample::backward(const Tensor& gy) {
  if (x_.numel() == 0) throw Error("DySample: backward without training forward");
  const int n = x_.dim(0), h = x_.dim(2), w = x_.dim(3);
  const int s = scale_, off_dim = 2 * s * s;
  const size_t plane = static_cast<size_t>(h) * w;
  Tensor gx(x_.shape());
  Tensor offs({off_dim, h * w});
  Tensor goffs({off_dim, h * w});
  for (int i = 0; i < n; ++i) {
    const double* xi = x_.data() + static_cast<size_t>(i) * c_ * plane;
    double* gxi = gx.data() + static_cast<size_t>(i) * c_ * plane;
    ops().gemm_nn(off_dim, h * w, c_, 1.0, proj_w_.value.data(), c_, xi, h * w,
                  0.0, offs.data(), h * w);
    for (int d = 0; d < off_dim; ++d) {
      double* row = offs.data() + static_cast<size_t>(d) * plane;
      const double b = proj_b_.value[d];
      for (size_t p = 0; p < plane; ++p) row[p] += b;
    }
    goffs.zero();
    for (int cy = 0; cy < h; ++cy) {
      for (int cx = 0; cx < w; ++cx) {
        const size_t cell = static_cast<size_t>(cy) * w + cx;
        for (int a = 0; a < s; ++a) {
          for (int b = 0; b < s; ++b) {
            const int p = a * s + b;
            const double dx = offs.data()[(2 * p) * plane + cell];
            const double dy = offs.data()[(2 * p + 1) * plane + cell];
            const double uy = cy + (a + 0.5) / s - 0.5 + scope_ * dy;
            const double ux = cx + (b + 0.5) / s - 0.5 + scope_ * dx;
            Sample sm;
            resolve_axis(uy, h, sm.y0, sm.y1, sm.ty, sm.clamp_y);
            resolve_axis(ux, w, sm.x0, sm.x1, sm.tx, sm.clamp_x);
            const int oy = cy * s + a, ox = cx * s + b;
            double gsy = 0.0, gsx = 0.0;
            for (int ch = 0; ch < c_; ++ch) {
              const double g = gy.at(i, ch, oy, ox);
              if (g == 0.0) continue;
              const double* xp = xi + static_cast<size_t>(ch) * plane;
              double* gp = gxi + static_cast<size_t>(ch) * plane;
              const double v00 = xp[static_cast<size_t>(sm.y0) * w + sm.x0];
              const double v01 = xp[static_cast<size_t>(sm.y0) * w + sm.x1];
              const double v10 = xp[static_cast<size_t>(sm.y1) * w + sm.x0];
              const double v11 = xp[static_cast<size_t>(sm.y1) * w + sm.x1];
              gp[static_cast<size_t>(sm.y0) * w + sm.x0] +=
                  (1 - sm.ty) * (1 - sm.tx) * g;
              gp[static_cast<size_t>(sm.y0) * w + sm.x1] += (1 - sm.ty) * sm.tx * g;
              gp[static_cast<size_t>(sm.y1) * w + sm.x0] += sm.ty * (1 - sm.tx) * g;
              gp[static_cast<size_t>(sm.y1) * w + sm.x1] += sm.ty * sm.tx * g;
              // d(value)/d(uy), d(value)/d(ux)
              gsy += g * ((1 - sm.tx) * (v10 - v00) + sm.tx * (v11 - v01));
              gsx += g * ((1 - sm.ty) * (v01 - v00) + sm.ty * (v11 - v10));
            }
            if (!sm.clamp_y)
              goffs.data()[(2 * p + 1) * plane + cell] += scope_ * gsy;
            if (!sm.clamp_x) goffs.data()[(2 * p) * plane + cell] += scope_ * gsx;
          }
        }
      }
    }
    // through the offset projection
    ops().gemm_nt(off_dim, c_, h * w, 1.0, goffs.data(), h * w, xi, h * w, 1.0,
                  proj_w_.grad.data(), c_);
    for (int d = 0; d < off_dim; ++d)
      proj_b_.grad[d] += ops().sum(goffs.data() + static_cast<size_t>(d) * plane,
                                   plane);
    ops().gemm_tn(c_, h * w, off_dim, 1.0, proj_w_.value.data(), c_, goffs.data(),
                  h * w, 1.0, gxi, h * w);
  }
  return gx;
}

}  // namespace sod::nn
