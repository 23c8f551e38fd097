#include "sod/kernels/kernels.hpp"
#include "sod/nn/layers.hpp"

namespace sod::nn {

using kern::ops;

Rcab::Rcab(std::string name, int channels, int reduction, Rng& rng)
    : c_(channels), reduction_(reduction) {
  if (channels < reduction)
    throw ValueError("Rcab: channels (" + std::to_string(channels) +
                     ") < reduction (" + std::to_string(reduction) + ")");
  conv1_ = std::make_unique<Conv2d>(name + ".conv1", channels, channels, 3, 1, 1, rng);
  conv2_ = std::make_unique<Conv2d>(name + ".conv2", channels, channels, 3, 1, 1, rng);
  relu_ = std::make_unique<ReLU>();
  fc1_ = std::make_unique<Linear>(name + ".ca.fc1", channels, channels / reduction, rng);
  fc2_ = std::make_unique<Linear>(name + ".ca.fc2", channels / reduction, channels, rng);
  ca_relu_ = std::make_unique<ReLU>();
}

void Rcab::collect_params(std::vector<Param*>& out) {
  conv1_->collect_params(out);
  conv2_->collect_params(out);
  fc1_->collect_params(out);
  fc2_->collect_params(out);
}

Tensor Rcab::forward(const Tensor& x, bool train) {
  if (x.ndim() != 4 || x.dim(1) != c_) throw ValueError("Rcab: bad input");
  const int n = x.dim(0), h = x.dim(2), w = x.dim(3);
  const size_t plane = static_cast<size_t>(h) * w;

  Tensor res = conv2_->forward(relu_->forward(conv1_->forward(x, train), train), train);

  // channel gate from globally pooled residual features
  Tensor pooled({n, c_});
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < c_; ++c)
      pooled.at(i, c) =
          ops().sum(res.data() + (static_cast<size_t>(i) * c_ + c) * plane, plane) /
          static_cast<double>(plane);
  Tensor gate_pre = fc2_->forward(
      ca_relu_->forward(fc1_->forward(pooled, train), train), train);
  Tensor gate = sigmoid(gate_pre);

  Tensor y(x.shape());
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < c_; ++c) {
      const double g = gate.at(i, c);
      const size_t off = (static_cast<size_t>(i) * c_ + c) * plane;
      const double* xr = x.data() + off;
      const double* rr = res.data() + off;
      double* yr = y.data() + off;
      for (size_t p = 0; p < plane; ++p) yr[p] = xr[p] + rr[p] * g;
    }

  if (train) {
    x_ = x;
    res_ = std::move(res);
    gate_ = std::move(gate);
  }
  return y;
}

Tensor Rcab::backward(const Tensor& gy) {
  if (x_.numel() == 0) throw Error("Rcab: backward without training forward");
  const int n = x_.dim(0), h = x_.dim(2), w = x_.dim(3);
  const size_t plane = static_cast<size_t>(h) * w;

  Tensor dres(res_.shape());
  Tensor dgate({n, c_});
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < c_; ++c) {
      const double g = gate_.at(i, c);
      const size_t off = (static_cast<size_t>(i) * c_ + c) * plane;
      const double* gr = gy.data() + off;
      const double* rr = res_.data() + off;
      double* dr = dres.data() + off;
      double acc = 0.0;
      for (size_t p = 0; p < plane; ++p) {
        dr[p] = gr[p] * g;
        acc += gr[p] * rr[p];
      }
      dgate.at(i, c) = acc;
    }

  // through sigmoid and the bottleneck
  Tensor dpre({n, c_});
  for (int64_t i = 0; i < dpre.numel(); ++i) {
    const double g = gate_[i];
    dpre[i] = dgate[i] * g * (1.0 - g);
  }
  Tensor dpooled = fc1_->backward(ca_relu_->backward(fc2_->backward(dpre)));

  // pooled mean spreads evenly over the plane
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < c_; ++c) {
      const double d = dpooled.at(i, c) / static_cast<double>(plane);
      double* dr = dres.data() + (static_cast<size_t>(i) * c_ + c) * plane;
      for (size_t p = 0; p < plane; ++p) dr[p] += d;
    }

  Tensor dx_conv = conv1_->backward(relu_->backward(conv2_->backward(dres)));
  return add(gy, dx_conv);
}

}  // namespace sod::nn
