#pragma once

#include <vector>

#include "sod/nn/tensor.hpp"

namespace sod::nn {

// Decoupled weight decay Adam.
class AdamW {
 public:
  explicit AdamW(std::vector<Param*> params, double beta1 = 0.9,
                 double beta2 = 0.999, double eps = 1e-8,
                 double weight_decay = 0.01);

  void step(double lr);
  void zero_grad();

  // Global L2 norm of all trainable gradients; when it exceeds max_norm the
  // gradients are scaled down to max_norm. Returns the pre-clip norm.
  double clip_grad_norm(double max_norm);
  double grad_norm() const;

 private:
  std::vector<Param*> params_;
  std::vector<Tensor> m_, v_;
  double beta1_, beta2_, eps_, wd_;
  int64_t t_ = 0;
};

}  // namespace sod::nn
