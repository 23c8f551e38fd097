#include "sod/nn/optim.hpp"

#include <cmath>

#include "sod/kernels/kernels.hpp"

namespace sod::nn {

AdamW::AdamW(std::vector<Param*> params, double beta1, double beta2, double eps,
             double weight_decay)
    : params_(std::move(params)), beta1_(beta1), beta2_(beta2), eps_(eps),
      wd_(weight_decay) {
  for (const Param* p : params_) {
    m_.emplace_back(p->value.shape());
    v_.emplace_back(p->value.shape());
  }
}

void AdamW::zero_grad() {
  for (Param* p : params_) p->zero_grad();
}

double AdamW::grad_norm() const {
  double sq = 0.0;
  for (const Param* p : params_)
    if (p->trainable)
      sq += kern::ops().sq_sum(p->grad.data(), static_cast<size_t>(p->grad.numel()));
  return std::sqrt(sq);
}

double AdamW::clip_grad_norm(double max_norm) {
  const double norm = grad_norm();
  if (norm > max_norm && norm > 0.0) {
    const double scale = max_norm / norm;
    for (Param* p : params_)
      if (p->trainable)
        kern::ops().scale(scale, p->grad.data(), static_cast<size_t>(p->grad.numel()));
  }
  return norm;
}

void AdamW::step(double lr) {
  ++t_;
  const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (size_t i = 0; i < params_.size(); ++i) {
    Param* p = params_[i];
    if (!p->trainable) continue;
    double* w = p->value.data();
    const double* g = p->grad.data();
    double* m = m_[i].data();
    double* v = v_[i].data();
    const int64_t n = p->value.numel();
    for (int64_t j = 0; j < n; ++j) {
      m[j] = beta1_ * m[j] + (1.0 - beta1_) * g[j];
      v[j] = beta2_ * v[j] + (1.0 - beta2_) * g[j] * g[j];
      const double mhat = m[j] / bc1;
      const double vhat = v[j] / bc2;
      w[j] -= lr * (mhat / (std::sqrt(vhat) + eps_) + wd_ * w[j]);
    }
  }
}

}  // namespace sod::nn
