#pragma once

#include <memory>
#include <vector>

#include "sod/nn/tensor.hpp"

namespace sod::nn {

// Explicit forward/backward layers. forward(x, train) caches whatever the
// matching backward(gy) needs; backward may only be called after a training
// forward and returns the gradient w.r.t. the input. Parameter gradients
// accumulate until zero_grad().
class Layer {
 public:
  virtual ~Layer() = default;
  virtual Tensor forward(const Tensor& x, bool train) = 0;
  virtual Tensor backward(const Tensor& gy) = 0;
  virtual void collect_params(std::vector<Param*>& out) {}
};

class Conv2d : public Layer {
 public:
  // [N, Cin, H, W] -> [N, Cout, Hout, Wout]
  Conv2d(std::string name, int cin, int cout, int ksize, int stride, int pad,
         Rng& rng, bool zero_init = false);

  Tensor forward(const Tensor& x, bool train) override;
  Tensor backward(const Tensor& gy) override;
  void collect_params(std::vector<Param*>& out) override {
    out.push_back(&weight_);
    out.push_back(&bias_);
  }

  Param& weight() { return weight_; }
  Param& bias() { return bias_; }
  int out_size(int in) const { return (in + 2 * pad_ - ksize_) / stride_ + 1; }

 private:
  void im2col(const double* img, int h, int w, double* col) const;
  void col2im(const double* col, int h, int w, double* img) const;

  int cin_, cout_, ksize_, stride_, pad_;
  Param weight_;  // [cout, cin*k*k]
  Param bias_;    // [cout]
  Tensor x_;
};

class BatchNorm2d : public Layer {
 public:
  explicit BatchNorm2d(std::string name, int channels, double momentum = 0.1,
                       double eps = 1e-5);

  Tensor forward(const Tensor& x, bool train) override;
  Tensor backward(const Tensor& gy) override;
  void collect_params(std::vector<Param*>& out) override {
    out.push_back(&gamma_);
    out.push_back(&beta_);
    out.push_back(&running_mean_);
    out.push_back(&running_var_);
  }

 private:
  int c_;
  double momentum_, eps_;
  Param gamma_, beta_;
  Param running_mean_, running_var_;  // non-trainable, checkpointed
  Tensor xhat_;
  std::vector<double> invstd_;
  bool trained_forward_ = false;
};

class ReLU : public Layer {
 public:
  Tensor forward(const Tensor& x, bool train) override;
  Tensor backward(const Tensor& gy) override;

 private:
  Tensor x_;
};

// Inverted dropout; identity in eval mode.
class Dropout : public Layer {
 public:
  Dropout(double p, Rng* rng) : p_(p), rng_(rng) {}

  Tensor forward(const Tensor& x, bool train) override;
  Tensor backward(const Tensor& gy) override;

 private:
  double p_;
  Rng* rng_;
  std::vector<uint8_t> keep_;
  bool active_ = false;
};

class Linear : public Layer {
 public:
  // [M, in] -> [M, out]
  Linear(std::string name, int in, int out, Rng& rng, bool zero_init = false);

  Tensor forward(const Tensor& x, bool train) override;
  Tensor backward(const Tensor& gy) override;
  void collect_params(std::vector<Param*>& out) override {
    out.push_back(&weight_);
    out.push_back(&bias_);
  }

  Param& weight() { return weight_; }
  Param& bias() { return bias_; }

 private:
  int in_, out_;
  Param weight_;  // [out, in]
  Param bias_;    // [out]
  Tensor x_;
};

class LayerNorm : public Layer {
 public:
  // normalizes the last dim of [M, D]
  LayerNorm(std::string name, int dim, double eps = 1e-6);

  Tensor forward(const Tensor& x, bool train) override;
  Tensor backward(const Tensor& gy) override;
  void collect_params(std::vector<Param*>& out) override {
    out.push_back(&gamma_);
    out.push_back(&beta_);
  }

 private:
  int d_;
  double eps_;
  Param gamma_, beta_;
  Tensor xhat_;
  std::vector<double> invstd_;
};

class Gelu : public Layer {
 public:
  Tensor forward(const Tensor& x, bool train) override;
  Tensor backward(const Tensor& gy) override;

 private:
  Tensor x_;
};

// Fixed bilinear x`scale` upsampling (half-pixel centers, clamped borders).
class UpsampleBilinear : public Layer {
 public:
  explicit UpsampleBilinear(int scale) : scale_(scale) {}

  Tensor forward(const Tensor& x, bool train) override;
  Tensor backward(const Tensor& gy) override;

 private:
  int scale_;
  std::vector<int> in_shape_;
};

// Content-aware upsampling: a zero-initialized linear projection of the
// input predicts per-subpixel sampling offsets; the output is the input
// bilinearly resampled at (base grid + scope * offsets). With zero offsets
// this is exactly bilinear upsampling.
class DySample : public Layer {
 public:
  DySample(std::string name, int channels, int scale, double scope);

  Tensor forward(const Tensor& x, bool train) override;
  Tensor backward(const Tensor& gy) override;
  void collect_params(std::vector<Param*>& out) override {
    out.push_back(&proj_w_);
    out.push_back(&proj_b_);
  }

  Param& proj_weight() { return proj_w_; }
  int scale() const { return scale_; }

 private:
  int c_, scale_;
  double scope_;
  Param proj_w_;  // [2*s*s, C]
  Param proj_b_;  // [2*s*s]
  Tensor x_;
};

// Residual block gated by channel attention pooled from its own features:
// y = x + scale(conv2(relu(conv1(x)))), scale = sigmoid(fc2(relu(fc1(gap)))).
class Rcab : public Layer {
 public:
  Rcab(std::string name, int channels, int reduction, Rng& rng);

  Tensor forward(const Tensor& x, bool train) override;
  Tensor backward(const Tensor& gy) override;
  void collect_params(std::vector<Param*>& out) override;

  Conv2d& conv1() { return *conv1_; }
  Conv2d& conv2() { return *conv2_; }
  Linear& fc1() { return *fc1_; }
  Linear& fc2() { return *fc2_; }

 private:
  int c_, reduction_;
  std::unique_ptr<Conv2d> conv1_, conv2_;
  std::unique_ptr<ReLU> relu_;
  std::unique_ptr<Linear> fc1_, fc2_;
  std::unique_ptr<ReLU> ca_relu_;
  Tensor x_, res_, pooled_, gate_pre_, gate_;
};

// ---- free tensor helpers ----

Tensor add(const Tensor& a, const Tensor& b);
Tensor concat_channels(const Tensor& a, const Tensor& b);           // [N,C,H,W]
void split_channels(const Tensor& g, int ca, Tensor& ga, Tensor& gb);
Tensor sigmoid(const Tensor& x);
// [N,C,H,W] <-> [N*L, C] token layout (L = H*W, row per position)
Tensor chw_to_tokens(const Tensor& x);
Tensor tokens_to_chw(const Tensor& t, int n, int c, int h, int w);

void softmax_rows(Tensor& m);
// gx = p .* (gy - rowsum(gy .* p))
Tensor softmax_backward(const Tensor& p, const Tensor& gy);

}  // namespace sod::nn
