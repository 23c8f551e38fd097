#include "sod/nn/layers.hpp"

#include <algorithm>
#include <cmath>

#include "sod/kernels/kernels.hpp"

namespace sod::nn {

using kern::ops;

namespace {

void check_4d(const Tensor& x, const char* who) {
  if (x.ndim() != 4) throw ValueError(std::string(who) + ": expected [N,C,H,W]");
}

constexpr double kSqrt2 = 1.4142135623730950488;
constexpr double kInvSqrt2Pi = 0.3989422804014326779;

}  // namespace

// ---------------------------------------------------------------- Conv2d

Conv2d::Conv2d(std::string name, int cin, int cout, int ksize, int stride,
               int pad, Rng& rng, bool zero_init)
    : cin_(cin), cout_(cout), ksize_(ksize), stride_(stride), pad_(pad) {
  Tensor w({cout, cin * ksize * ksize});
  if (!zero_init) {
    const double stddev = std::sqrt(2.0 / (cin * ksize * ksize));
    for (int64_t i = 0; i < w.numel(); ++i) w[i] = rng.normal(0.0, stddev);
  }
  weight_ = Param(name + ".weight", std::move(w));
  bias_ = Param(name + ".bias", Tensor({cout}));
}

void Conv2d::im2col(const double* img, int h, int w, double* col) const {
  const int oh = (h + 2 * pad_ - ksize_) / stride_ + 1;
  const int ow = (w + 2 * pad_ - ksize_) / stride_ + 1;
  const size_t plane = static_cast<size_t>(oh) * ow;
  for (int c = 0; c < cin_; ++c) {
    const double* src = img + static_cast<size_t>(c) * h * w;
    for (int ky = 0; ky < ksize_; ++ky) {
      for (int kx = 0; kx < ksize_; ++kx) {
        double* dst = col + (static_cast<size_t>(c) * ksize_ * ksize_ +
                             static_cast<size_t>(ky) * ksize_ + kx) *
                                plane;
        for (int oy = 0; oy < oh; ++oy) {
          const int iy = oy * stride_ - pad_ + ky;
          double* drow = dst + static_cast<size_t>(oy) * ow;
          if (iy < 0 || iy >= h) {
            std::fill(drow, drow + ow, 0.0);
            continue;
          }
          const double* srow = src + static_cast<size_t>(iy) * w;
          for (int ox = 0; ox < ow; ++ox) {
            const int ix = ox * stride_ - pad_ + kx;
            drow[ox] = (ix >= 0 && ix < w) ? srow[ix] : 0.0;
          }
        }
      }
    }
  }
}

void Conv2d::col2im(const double* col, int h, int w, double* img) const {
  const int oh = (h + 2 * pad_ - ksize_) / stride_ + 1;
  const int ow = (w + 2 * pad_ - ksize_) / stride_ + 1;
  const size_t plane = static_cast<size_t>(oh) * ow;
  for (int c = 0; c < cin_; ++c) {
    double* dst = img + static_cast<size_t>(c) * h * w;
    for (int ky = 0; ky < ksize_; ++ky) {
      for (int kx = 0; kx < ksize_; ++kx) {
        const double* src = col + (static_cast<size_t>(c) * ksize_ * ksize_ +
                                   static_cast<size_t>(ky) * ksize_ + kx) *
                                      plane;
        for (int oy = 0; oy < oh; ++oy) {
          const int iy = oy * stride_ - pad_ + ky;
          if (iy < 0 || iy >= h) continue;
          const double* srow = src + static_cast<size_t>(oy) * ow;
          double* drow = dst + static_cast<size_t>(iy) * w;
          for (int ox = 0; ox < ow; ++ox) {
            const int ix = ox * stride_ - pad_ + kx;
            if (ix >= 0 && ix < w) drow[ix] += srow[ox];
          }
        }
      }
    }
  }
}

Tensor Conv2d::forward(const Tensor& x, bool train) {
  check_4d(x, "Conv2d");
  if (x.dim(1) != cin_) throw ValueError("Conv2d: channel mismatch");
  const int n = x.dim(0), h = x.dim(2), w = x.dim(3);
  const int oh = out_size(h), ow = out_size(w);
  if (oh < 1 || ow < 1)
    throw ValueError("Conv2d: spatial input " + x.shape_str() + " too small");
  Tensor y({n, cout_, oh, ow});
  const int ckk = cin_ * ksize_ * ksize_;
  const size_t plane = static_cast<size_t>(oh) * ow;
  Tensor col({ckk, oh * ow});
  for (int i = 0; i < n; ++i) {
    const double* xi = x.data() + static_cast<size_t>(i) * cin_ * h * w;
    double* yi = y.data() + static_cast<size_t>(i) * cout_ * plane;
    im2col(xi, h, w, col.data());
    ops().gemm_nn(cout_, oh * ow, ckk, 1.0, weight_.value.data(), ckk,
                  col.data(), oh * ow, 0.0, yi, oh * ow);
    for (int co = 0; co < cout_; ++co) {
      const double b = bias_.value[co];
      double* row = yi + static_cast<size_t>(co) * plane;
      for (size_t p = 0; p < plane; ++p) row[p] += b;
    }
  }
  if (train) x_ = x;
  return y;
}

Tensor Conv2d::backward(const Tensor& gy) {
  if (x_.numel() == 0) throw Error("Conv2d: backward without training forward");
  const int n = x_.dim(0), h = x_.dim(2), w = x_.dim(3);
  const int oh = out_size(h), ow = out_size(w);
  const int ckk = cin_ * ksize_ * ksize_;
  const size_t plane = static_cast<size_t>(oh) * ow;
  Tensor gx(x_.shape());
  Tensor col({ckk, oh * ow}), gcol({ckk, oh * ow});
  for (int i = 0; i < n; ++i) {
    const double* xi = x_.data() + static_cast<size_t>(i) * cin_ * h * w;
    const double* gyi = gy.data() + static_cast<size_t>(i) * cout_ * plane;
    double* gxi = gx.data() + static_cast<size_t>(i) * cin_ * h * w;
    im2col(xi, h, w, col.data());
    // dW += gy * col^T, db += rowsum(gy)
    ops().gemm_nt(cout_, ckk, oh * ow, 1.0, gyi, oh * ow, col.data(), oh * ow,
                  1.0, weight_.grad.data(), ckk);
    for (int co = 0; co < cout_; ++co)
      bias_.grad[co] += ops().sum(gyi + static_cast<size_t>(co) * plane, plane);
    // dcol = W^T * gy, scattered back to the input
    ops().gemm_tn(ckk, oh * ow, cout_, 1.0, weight_.value.data(), ckk, gyi,
                  oh * ow, 0.0, gcol.data(), oh * ow);
    col2im(gcol.data(), h, w, gxi);
  }
  return gx;
}

// ------------------------------------------------------------ BatchNorm2d

BatchNorm2d::BatchNorm2d(std::string name, int channels, double momentum,
                         double eps)
    : c_(channels), momentum_(momentum), eps_(eps) {
  gamma_ = Param(name + ".gamma", Tensor::full({channels}, 1.0));
  beta_ = Param(name + ".beta", Tensor({channels}));
  running_mean_ = Param(name + ".running_mean", Tensor({channels}), false);
  running_var_ = Param(name + ".running_var", Tensor::full({channels}, 1.0), false);
}

Tensor BatchNorm2d::forward(const Tensor& x, bool train) {
  check_4d(x, "BatchNorm2d");
  if (x.dim(1) != c_) throw ValueError("BatchNorm2d: channel mismatch");
  const int n = x.dim(0), h = x.dim(2), w = x.dim(3);
  const size_t plane = static_cast<size_t>(h) * w;
  const double m = static_cast<double>(n) * plane;
  Tensor y(x.shape());
  invstd_.assign(c_, 0.0);
  if (train) xhat_ = Tensor(x.shape());
  trained_forward_ = train;

  for (int c = 0; c < c_; ++c) {
    double mean, var;
    if (train) {
      double s = 0.0;
      for (int i = 0; i < n; ++i)
        s += ops().sum(x.data() + (static_cast<size_t>(i) * c_ + c) * plane, plane);
      mean = s / m;
      double sq = 0.0;
      for (int i = 0; i < n; ++i) {
        const double* p = x.data() + (static_cast<size_t>(i) * c_ + c) * plane;
        for (size_t k = 0; k < plane; ++k) {
          const double d = p[k] - mean;
          sq += d * d;
        }
      }
      var = sq / m;
      const double unbiased = m > 1.0 ? sq / (m - 1.0) : var;
      running_mean_.value[c] =
          (1.0 - momentum_) * running_mean_.value[c] + momentum_ * mean;
      running_var_.value[c] =
          (1.0 - momentum_) * running_var_.value[c] + momentum_ * unbiased;
    } else {
      mean = running_mean_.value[c];
      var = running_var_.value[c];
    }
    const double inv = 1.0 / std::sqrt(var + eps_);
    invstd_[c] = inv;
    const double g = gamma_.value[c], b = beta_.value[c];
    for (int i = 0; i < n; ++i) {
      const double* p = x.data() + (static_cast<size_t>(i) * c_ + c) * plane;
      double* q = y.data() + (static_cast<size_t>(i) * c_ + c) * plane;
      double* xh = train ? xhat_.data() + (static_cast<size_t>(i) * c_ + c) * plane
                         : nullptr;
      for (size_t k = 0; k < plane; ++k) {
        const double hx = (p[k] - mean) * inv;
        if (xh) xh[k] = hx;
        q[k] = g * hx + b;
      }
    }
  }
  return y;
}

Tensor BatchNorm2d::backward(const Tensor& gy) {
  if (!trained_forward_)
    throw Error("BatchNorm2d: backward without training forward");
  const int n = gy.dim(0), h = gy.dim(2), w = gy.dim(3);
  const size_t plane = static_cast<size_t>(h) * w;
  const double m = static_cast<double>(n) * plane;
  Tensor gx(gy.shape());
  for (int c = 0; c < c_; ++c) {
    double sum_gy = 0.0, sum_gy_xhat = 0.0;
    for (int i = 0; i < n; ++i) {
      const size_t off = (static_cast<size_t>(i) * c_ + c) * plane;
      sum_gy += ops().sum(gy.data() + off, plane);
      sum_gy_xhat += ops().dot(gy.data() + off, xhat_.data() + off, plane);
    }
    gamma_.grad[c] += sum_gy_xhat;
    beta_.grad[c] += sum_gy;
    const double g_inv = gamma_.value[c] * invstd_[c];
    const double mean_gy = sum_gy / m;
    const double mean_gy_xhat = sum_gy_xhat / m;
    for (int i = 0; i < n; ++i) {
      const size_t off = (static_cast<size_t>(i) * c_ + c) * plane;
      const double* gp = gy.data() + off;
      const double* xh = xhat_.data() + off;
      double* gq = gx.data() + off;
      for (size_t k = 0; k < plane; ++k)
        gq[k] = g_inv * (gp[k] - mean_gy - xh[k] * mean_gy_xhat);
    }
  }
  return gx;
}

// ----------------------------------------------------------------- ReLU

Tensor ReLU::forward(const Tensor& x, bool train) {
  Tensor y(x.shape());
  ops().relu(x.data(), y.data(), static_cast<size_t>(x.numel()));
  if (train) x_ = x;
  return y;
}

Tensor ReLU::backward(const Tensor& gy) {
  if (x_.numel() == 0) throw Error("ReLU: backward without training forward");
  Tensor gx(gy.shape());
  ops().relu_bwd(x_.data(), gy.data(), gx.data(), static_cast<size_t>(gy.numel()));
  return gx;
}

// -------------------------------------------------------------- Dropout

Tensor Dropout::forward(const Tensor& x, bool train) {
  active_ = train && p_ > 0.0;
  if (!active_) return x;
  if (!rng_) throw Error("Dropout: no rng attached");
  const double keep_scale = 1.0 / (1.0 - p_);
  keep_.assign(static_cast<size_t>(x.numel()), 0);
  Tensor y(x.shape());
  for (int64_t i = 0; i < x.numel(); ++i) {
    const bool keep = rng_->uniform() >= p_;
    keep_[static_cast<size_t>(i)] = keep;
    y[i] = keep ? x[i] * keep_scale : 0.0;
  }
  return y;
}

Tensor Dropout::backward(const Tensor& gy) {
  if (!active_) return gy;
  const double keep_scale = 1.0 / (1.0 - p_);
  Tensor gx(gy.shape());
  for (int64_t i = 0; i < gy.numel(); ++i)
    gx[i] = keep_[static_cast<size_t>(i)] ? gy[i] * keep_scale : 0.0;
  return gx;
}

// --------------------------------------------------------------- Linear

Linear::Linear(std::string name, int in, int out, Rng& rng, bool zero_init)
    : in_(in), out_(out) {
  Tensor w({out, in});
  if (!zero_init) {
    const double stddev = std::sqrt(1.0 / in);
    for (int64_t i = 0; i < w.numel(); ++i) w[i] = rng.normal(0.0, stddev);
  }
  weight_ = Param(name + ".weight", std::move(w));
  bias_ = Param(name + ".bias", Tensor({out}));
}

Tensor Linear::forward(const Tensor& x, bool train) {
  if (x.ndim() != 2 || x.dim(1) != in_)
    throw ValueError("Linear: expected [M," + std::to_string(in_) + "], got " +
                     x.shape_str());
  const int m = x.dim(0);
  Tensor y({m, out_});
  ops().gemm_nt(m, out_, in_, 1.0, x.data(), in_, weight_.value.data(), in_, 0.0,
                y.data(), out_);
  for (int i = 0; i < m; ++i) {
    double* row = y.data() + static_cast<size_t>(i) * out_;
    ops().axpy(1.0, bias_.value.data(), row, static_cast<size_t>(out_));
  }
  if (train) x_ = x;
  return y;
}

Tensor Linear::backward(const Tensor& gy) {
  if (x_.numel() == 0) throw Error("Linear: backward without training forward");
  const int m = x_.dim(0);
  Tensor gx({m, in_});
  ops().gemm_nn(m, in_, out_, 1.0, gy.data(), out_, weight_.value.data(), in_,
                0.0, gx.data(), in_);
  ops().gemm_tn(out_, in_, m, 1.0, gy.data(), out_, x_.data(), in_, 1.0,
                weight_.grad.data(), in_);
  for (int i = 0; i < m; ++i)
    ops().axpy(1.0, gy.data() + static_cast<size_t>(i) * out_, bias_.grad.data(),
               static_cast<size_t>(out_));
  return gx;
}

// ------------------------------------------------------------ LayerNorm

LayerNorm::LayerNorm(std::string name, int dim, double eps) : d_(dim), eps_(eps) {
  gamma_ = Param(name + ".gamma", Tensor::full({dim}, 1.0));
  beta_ = Param(name + ".beta", Tensor({dim}));
}

Tensor LayerNorm::forward(const Tensor& x, bool train) {
  if (x.ndim() != 2 || x.dim(1) != d_) throw ValueError("LayerNorm: bad shape");
  const int m = x.dim(0);
  Tensor y(x.shape());
  xhat_ = Tensor(x.shape());
  invstd_.assign(static_cast<size_t>(m), 0.0);
  for (int i = 0; i < m; ++i) {
    const double* row = x.data() + static_cast<size_t>(i) * d_;
    const double mean = ops().sum(row, static_cast<size_t>(d_)) / d_;
    double var = 0.0;
    for (int j = 0; j < d_; ++j) {
      const double d = row[j] - mean;
      var += d * d;
    }
    var /= d_;
    const double inv = 1.0 / std::sqrt(var + eps_);
    invstd_[static_cast<size_t>(i)] = inv;
    double* xh = xhat_.data() + static_cast<size_t>(i) * d_;
    double* yr = y.data() + static_cast<size_t>(i) * d_;
    for (int j = 0; j < d_; ++j) {
      xh[j] = (row[j] - mean) * inv;
      yr[j] = gamma_.value[j] * xh[j] + beta_.value[j];
    }
  }
  if (!train) {
    xhat_ = Tensor();
    invstd_.clear();
    // keep nothing in eval mode
  }
  return y;
}

Tensor LayerNorm::backward(const Tensor& gy) {
  if (xhat_.numel() == 0)
    throw Error("LayerNorm: backward without training forward");
  const int m = gy.dim(0);
  Tensor gx(gy.shape());
  std::vector<double> a(static_cast<size_t>(d_));
  for (int i = 0; i < m; ++i) {
    const double* gr = gy.data() + static_cast<size_t>(i) * d_;
    const double* xh = xhat_.data() + static_cast<size_t>(i) * d_;
    double sum_a = 0.0, sum_ax = 0.0;
    for (int j = 0; j < d_; ++j) {
      a[static_cast<size_t>(j)] = gr[j] * gamma_.value[j];
      sum_a += a[static_cast<size_t>(j)];
      sum_ax += a[static_cast<size_t>(j)] * xh[j];
      gamma_.grad[j] += gr[j] * xh[j];
      beta_.grad[j] += gr[j];
    }
    const double mean_a = sum_a / d_;
    const double mean_ax = sum_ax / d_;
    const double inv = invstd_[static_cast<size_t>(i)];
    double* gq = gx.data() + static_cast<size_t>(i) * d_;
    for (int j = 0; j < d_; ++j)
      gq[j] = inv * (a[static_cast<size_t>(j)] - mean_a - xh[j] * mean_ax);
  }
  return gx;
}

// ----------------------------------------------------------------- Gelu

Tensor Gelu::forward(const Tensor& x, bool train) {
  Tensor y(x.shape());
  for (int64_t i = 0; i < x.numel(); ++i)
    y[i] = 0.5 * x[i] * (1.0 + std::erf(x[i] / kSqrt2));
  if (train) x_ = x;
  return y;
}

Tensor Gelu::backward(const Tensor& gy) {
  if (x_.numel() == 0) throw Error("Gelu: backward without training forward");
  Tensor gx(gy.shape());
  for (int64_t i = 0; i < gy.numel(); ++i) {
    const double x = x_[i];
    const double cdf = 0.5 * (1.0 + std::erf(x / kSqrt2));
    const double pdf = kInvSqrt2Pi * std::exp(-0.5 * x * x);
    gx[i] = gy[i] * (cdf + x * pdf);
  }
  return gx;
}

// ----------------------------------------------------- UpsampleBilinear

namespace {

struct Tap {
  int lo, hi;
  double t;
  bool clamped;
};

inline Tap tap_for(int out_i, int scale, int in_n) {
  double u = (out_i + 0.5) / scale - 0.5;
  bool clamped = false;
  if (u <= 0.0) {
    u = 0.0;
    clamped = true;
  } else if (u >= in_n - 1) {
    u = in_n - 1;
    clamped = true;
  }
  const int lo = static_cast<int>(u);
  return {lo, std::min(lo + 1, in_n - 1), u - lo, clamped};
}

}  // namespace

Tensor UpsampleBilinear::forward(const Tensor& x, bool train) {
  check_4d(x, "UpsampleBilinear");
  const int n = x.dim(0), c = x.dim(1), h = x.dim(2), w = x.dim(3);
  const int oh = h * scale_, ow = w * scale_;
  Tensor y({n, c, oh, ow});
  for (int oy = 0; oy < oh; ++oy) {
    const Tap ty = tap_for(oy, scale_, h);
    for (int ox = 0; ox < ow; ++ox) {
      const Tap tx = tap_for(ox, scale_, w);
      for (int i = 0; i < n; ++i)
        for (int ch = 0; ch < c; ++ch) {
          const double v00 = x.at(i, ch, ty.lo, tx.lo);
          const double v01 = x.at(i, ch, ty.lo, tx.hi);
          const double v10 = x.at(i, ch, ty.hi, tx.lo);
          const double v11 = x.at(i, ch, ty.hi, tx.hi);
          y.at(i, ch, oy, ox) = (1 - ty.t) * ((1 - tx.t) * v00 + tx.t * v01) +
                                ty.t * ((1 - tx.t) * v10 + tx.t * v11);
        }
    }
  }
  if (train) in_shape_ = x.shape();
  return y;
}

Tensor UpsampleBilinear::backward(const Tensor& gy) {
  if (in_shape_.empty())
    throw Error("UpsampleBilinear: backward without training forward");
  const int n = in_shape_[0], c = in_shape_[1], h = in_shape_[2], w = in_shape_[3];
  const int oh = h * scale_, ow = w * scale_;
  Tensor gx({n, c, h, w});
  for (int oy = 0; oy < oh; ++oy) {
    const Tap ty = tap_for(oy, scale_, h);
    for (int ox = 0; ox < ow; ++ox) {
      const Tap tx = tap_for(ox, scale_, w);
      for (int i = 0; i < n; ++i)
        for (int ch = 0; ch < c; ++ch) {
          const double g = gy.at(i, ch, oy, ox);
          gx.at(i, ch, ty.lo, tx.lo) += (1 - ty.t) * (1 - tx.t) * g;
          gx.at(i, ch, ty.lo, tx.hi) += (1 - ty.t) * tx.t * g;
          gx.at(i, ch, ty.hi, tx.lo) += ty.t * (1 - tx.t) * g;
          gx.at(i, ch, ty.hi, tx.hi) += ty.t * tx.t * g;
        }
    }
  }
  return gx;
}

// ---------------------------------------------------------- free helpers

Tensor add(const Tensor& a, const Tensor& b) {
  if (!a.same_shape(b))
    throw ValueError("add: shape mismatch " + a.shape_str() + " vs " + b.shape_str());
  Tensor y(a.shape());
  ops().add(a.data(), b.data(), y.data(), static_cast<size_t>(a.numel()));
  return y;
}

Tensor concat_channels(const Tensor& a, const Tensor& b) {
  check_4d(a, "concat_channels");
  check_4d(b, "concat_channels");
  if (a.dim(0) != b.dim(0) || a.dim(2) != b.dim(2) || a.dim(3) != b.dim(3))
    throw ValueError("concat_channels: spatial/batch mismatch");
  const int n = a.dim(0), ca = a.dim(1), cb = b.dim(1), h = a.dim(2), w = a.dim(3);
  const size_t plane = static_cast<size_t>(h) * w;
  Tensor y({n, ca + cb, h, w});
  for (int i = 0; i < n; ++i) {
    std::copy_n(a.data() + static_cast<size_t>(i) * ca * plane, ca * plane,
                y.data() + static_cast<size_t>(i) * (ca + cb) * plane);
    std::copy_n(b.data() + static_cast<size_t>(i) * cb * plane, cb * plane,
                y.data() + (static_cast<size_t>(i) * (ca + cb) + ca) * plane);
  }
  return y;
}

void split_channels(const Tensor& g, int ca, Tensor& ga, Tensor& gb) {
  const int n = g.dim(0), c = g.dim(1), h = g.dim(2), w = g.dim(3);
  const int cb = c - ca;
  const size_t plane = static_cast<size_t>(h) * w;
  ga = Tensor({n, ca, h, w});
  gb = Tensor({n, cb, h, w});
  for (int i = 0; i < n; ++i) {
    std::copy_n(g.data() + static_cast<size_t>(i) * c * plane, ca * plane,
                ga.data() + static_cast<size_t>(i) * ca * plane);
    std::copy_n(g.data() + (static_cast<size_t>(i) * c + ca) * plane, cb * plane,
                gb.data() + static_cast<size_t>(i) * cb * plane);
  }
}

Tensor sigmoid(const Tensor& x) {
  Tensor y(x.shape());
  for (int64_t i = 0; i < x.numel(); ++i) y[i] = 1.0 / (1.0 + std::exp(-x[i]));
  return y;
}

Tensor chw_to_tokens(const Tensor& x) {
  const int n = x.dim(0), c = x.dim(1), h = x.dim(2), w = x.dim(3);
  const size_t plane = static_cast<size_t>(h) * w;
  Tensor t({n * h * w, c});
  for (int i = 0; i < n; ++i)
    for (int ch = 0; ch < c; ++ch) {
      const double* src = x.data() + (static_cast<size_t>(i) * c + ch) * plane;
      for (size_t p = 0; p < plane; ++p)
        t.data()[(static_cast<size_t>(i) * plane + p) * c + ch] = src[p];
    }
  return t;
}

Tensor tokens_to_chw(const Tensor& t, int n, int c, int h, int w) {
  const size_t plane = static_cast<size_t>(h) * w;
  Tensor x({n, c, h, w});
  for (int i = 0; i < n; ++i)
    for (int ch = 0; ch < c; ++ch) {
      double* dst = x.data() + (static_cast<size_t>(i) * c + ch) * plane;
      for (size_t p = 0; p < plane; ++p)
        dst[p] = t.data()[(static_cast<size_t>(i) * plane + p) * c + ch];
    }
  return x;
}

void softmax_rows(Tensor& m) {
  const int rows = m.dim(0), cols = m.dim(1);
  for (int i = 0; i < rows; ++i) {
    double* row = m.data() + static_cast<size_t>(i) * cols;
    double mx = row[0];
    for (int j = 1; j < cols; ++j) mx = std::max(mx, row[j]);
    double s = 0.0;
    for (int j = 0; j < cols; ++j) {
      row[j] = std::exp(row[j] - mx);
      s += row[j];
    }
    const double inv = 1.0 / s;
    for (int j = 0; j < cols; ++j) row[j] *= inv;
  }
}

Tensor softmax_backward(const Tensor& p, const Tensor& gy) {
  const int rows = p.dim(0), cols = p.dim(1);
  Tensor gx(p.shape());
  for (int i = 0; i < rows; ++i) {
    const double* pr = p.data() + static_cast<size_t>(i) * cols;
    const double* gr = gy.data() + static_cast<size_t>(i) * cols;
    const double dot = ops().dot(pr, gr, static_cast<size_t>(cols));
    double* gq = gx.data() + static_cast<size_t>(i) * cols;
    for (int j = 0; j < cols; ++j) gq[j] = pr[j] * (gr[j] - dot);
  }
  return gx;
}

}  // namespace sod::nn
