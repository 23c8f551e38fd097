#pragma once

#include <memory>

#include "sod/nn/layers.hpp"

namespace sod::nn {

// Standard pre-norm multi-head self-attention over [N, L, D] token tensors.
class MultiHeadAttention : public Layer {
 public:
  MultiHeadAttention(std::string name, int dim, int heads, double dropout,
                     Rng* dropout_rng, Rng& init_rng);

  Tensor forward(const Tensor& x, bool train) override;
  Tensor backward(const Tensor& gy) override;
  void collect_params(std::vector<Param*>& out) override {
    qkv_->collect_params(out);
    proj_->collect_params(out);
  }

 private:
  int dim_, heads_, dh_;
  double p_;
  Rng* drop_rng_;
  std::unique_ptr<Linear> qkv_, proj_;
  std::unique_ptr<Dropout> proj_drop_;
  Tensor qkv_out_, probs_;          // cached for backward
  std::vector<uint8_t> attn_keep_;  // dropout masks over probs_
  bool dropped_ = false;
  int n_ = 0, l_ = 0;
};

class TransformerBlock : public Layer {
 public:
  TransformerBlock(std::string name, int dim, int heads, double dropout,
                   Rng* dropout_rng, Rng& init_rng, int mlp_ratio = 4);

  Tensor forward(const Tensor& x, bool train) override;
  Tensor backward(const Tensor& gy) override;
  void collect_params(std::vector<Param*>& out) override;

 private:
  int dim_;
  std::unique_ptr<LayerNorm> ln1_, ln2_;
  std::unique_ptr<MultiHeadAttention> attn_;
  std::unique_ptr<Linear> fc1_, fc2_;
  std::unique_ptr<Gelu> gelu_;
  std::unique_ptr<Dropout> mlp_drop1_, mlp_drop2_;
  std::vector<int> in_shape_;
};

}  // namespace sod::nn
