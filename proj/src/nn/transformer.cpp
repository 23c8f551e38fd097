#include "sod/nn/transformer.hpp"

#include <cmath>

#include "sod/kernels/kernels.hpp"

namespace sod::nn {

using kern::ops;

MultiHeadAttention::MultiHeadAttention(std::string name, int dim, int heads,
                                       double dropout, Rng* dropout_rng,
                                       Rng& init_rng)
    : dim_(dim), heads_(heads), dh_(dim / heads), p_(dropout),
      drop_rng_(dropout_rng) {
  if (dim % heads != 0) throw ValueError("MultiHeadAttention: dim % heads != 0");
  qkv_ = std::make_unique<Linear>(name + ".qkv", dim, 3 * dim, init_rng);
  proj_ = std::make_unique<Linear>(name + ".proj", dim, dim, init_rng);
  proj_drop_ = std::make_unique<Dropout>(dropout, dropout_rng);
}

Tensor MultiHeadAttention::forward(const Tensor& x, bool train) {
  if (x.ndim() != 3 || x.dim(2) != dim_)
    throw ValueError("MultiHeadAttention: expected [N,L,D]");
  n_ = x.dim(0);
  l_ = x.dim(1);
  const int n = n_, l = l_, dh = dh_;
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(dh));

  Tensor qkv = qkv_->forward(x.reshaped({n * l, dim_}), train);  // [N*L, 3D]
  Tensor out({n * l, dim_});
  Tensor probs({n * heads_, l, l});
  dropped_ = train && p_ > 0.0;
  if (dropped_) attn_keep_.assign(static_cast<size_t>(n) * heads_ * l * l, 1);

  Tensor q({l, dh}), k({l, dh}), v({l, dh}), scores({l, l}), ohead({l, dh});
  for (int i = 0; i < n; ++i) {
    for (int hh = 0; hh < heads_; ++hh) {
      const int off = hh * dh;
      for (int t = 0; t < l; ++t) {
        const double* row = qkv.data() + (static_cast<size_t>(i) * l + t) * 3 * dim_;
        for (int j = 0; j < dh; ++j) {
          q.at(t, j) = row[off + j];
          k.at(t, j) = row[dim_ + off + j];
          v.at(t, j) = row[2 * dim_ + off + j];
        }
      }
      ops().gemm_nt(l, l, dh, inv_sqrt, q.data(), dh, k.data(), dh, 0.0,
                    scores.data(), l);
      softmax_rows(scores);
      double* prob = probs.data() + static_cast<size_t>(i * heads_ + hh) * l * l;
      std::copy_n(scores.data(), static_cast<size_t>(l) * l, prob);
      if (dropped_) {
        const double keep_scale = 1.0 / (1.0 - p_);
        uint8_t* keep = attn_keep_.data() + static_cast<size_t>(i * heads_ + hh) * l * l;
        for (size_t e = 0; e < static_cast<size_t>(l) * l; ++e) {
          const bool kept = drop_rng_->uniform() >= p_;
          keep[e] = kept;
          scores.data()[e] = kept ? scores.data()[e] * keep_scale : 0.0;
        }
      }
      ops().gemm_nn(l, dh, l, 1.0, scores.data(), l, v.data(), dh, 0.0,
                    ohead.data(), dh);
      for (int t = 0; t < l; ++t)
        std::copy_n(ohead.data() + static_cast<size_t>(t) * dh, dh,
                    out.data() + (static_cast<size_t>(i) * l + t) * dim_ + off);
    }
  }
  Tensor y = proj_drop_->forward(proj_->forward(out, train), train);
  if (train) {
    qkv_out_ = std::move(qkv);
    probs_ = std::move(probs);
  }
  return std::move(y).reshaped({n, l, dim_});
}

Tensor MultiHeadAttention::backward(const Tensor& gy) {
  if (qkv_out_.numel() == 0)
    throw Error("MultiHeadAttention: backward without training forward");
  const int n = n_, l = l_, dh = dh_;
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(dh));

  Tensor gout = proj_->backward(proj_drop_->backward(gy.reshaped({n * l, dim_})));
  Tensor gqkv({n * l, 3 * dim_});

  Tensor q({l, dh}), k({l, dh}), v({l, dh});
  Tensor gohead({l, dh}), gprobs({l, l}), probs_kept({l, l});
  Tensor gq({l, dh}), gk({l, dh}), gv({l, dh});
  for (int i = 0; i < n; ++i) {
    for (int hh = 0; hh < heads_; ++hh) {
      const int off = hh * dh;
      for (int t = 0; t < l; ++t) {
        const double* row =
            qkv_out_.data() + (static_cast<size_t>(i) * l + t) * 3 * dim_;
        for (int j = 0; j < dh; ++j) {
          q.at(t, j) = row[off + j];
          k.at(t, j) = row[dim_ + off + j];
          v.at(t, j) = row[2 * dim_ + off + j];
        }
        std::copy_n(gout.data() + (static_cast<size_t>(i) * l + t) * dim_ + off,
                    dh, gohead.data() + static_cast<size_t>(t) * dh);
      }
      const double* prob = probs_.data() + static_cast<size_t>(i * heads_ + hh) * l * l;
      // reconstruct post-dropout probabilities
      if (dropped_) {
        const double keep_scale = 1.0 / (1.0 - p_);
        const uint8_t* keep =
            attn_keep_.data() + static_cast<size_t>(i * heads_ + hh) * l * l;
        for (size_t e = 0; e < static_cast<size_t>(l) * l; ++e)
          probs_kept.data()[e] = keep[e] ? prob[e] * keep_scale : 0.0;
      } else {
        std::copy_n(prob, static_cast<size_t>(l) * l, probs_kept.data());
      }
      // gv = P_kept^T * gO ; gP_kept = gO * v^T
      ops().gemm_tn(l, dh, l, 1.0, probs_kept.data(), l, gohead.data(), dh, 0.0,
                    gv.data(), dh);
      ops().gemm_nt(l, l, dh, 1.0, gohead.data(), dh, v.data(), dh, 0.0,
                    gprobs.data(), l);
      if (dropped_) {
        const double keep_scale = 1.0 / (1.0 - p_);
        const uint8_t* keep =
            attn_keep_.data() + static_cast<size_t>(i * heads_ + hh) * l * l;
        for (size_t e = 0; e < static_cast<size_t>(l) * l; ++e)
          gprobs.data()[e] = keep[e] ? gprobs.data()[e] * keep_scale : 0.0;
      }
      Tensor pcopy({l, l});
      std::copy_n(prob, static_cast<size_t>(l) * l, pcopy.data());
      Tensor gscores = softmax_backward(pcopy, gprobs);
      // gq = (gS * k) / sqrt(dh) ; gk = (gS^T * q) / sqrt(dh)
      ops().gemm_nn(l, dh, l, inv_sqrt, gscores.data(), l, k.data(), dh, 0.0,
                    gq.data(), dh);
      ops().gemm_tn(l, dh, l, inv_sqrt, gscores.data(), l, q.data(), dh, 0.0,
                    gk.data(), dh);
      for (int t = 0; t < l; ++t) {
        double* row = gqkv.data() + (static_cast<size_t>(i) * l + t) * 3 * dim_;
        for (int j = 0; j < dh; ++j) {
          row[off + j] = gq.at(t, j);
          row[dim_ + off + j] = gk.at(t, j);
          row[2 * dim_ + off + j] = gv.at(t, j);
        }
      }
    }
  }
  Tensor gx = qkv_->backward(gqkv);
  return std::move(gx).reshaped({n, l, dim_});
}

TransformerBlock::TransformerBlock(std::string name, int dim, int heads,
                                   double dropout, Rng* dropout_rng,
                                   Rng& init_rng, int mlp_ratio)
    : dim_(dim) {
  ln1_ = std::make_unique<LayerNorm>(name + ".ln1", dim);
  ln2_ = std::make_unique<LayerNorm>(name + ".ln2", dim);
  attn_ = std::make_unique<MultiHeadAttention>(name + ".attn", dim, heads,
                                               dropout, dropout_rng, init_rng);
  fc1_ = std::make_unique<Linear>(name + ".mlp.fc1", dim, dim * mlp_ratio, init_rng);
  fc2_ = std::make_unique<Linear>(name + ".mlp.fc2", dim * mlp_ratio, dim, init_rng);
  gelu_ = std::make_unique<Gelu>();
  mlp_drop1_ = std::make_unique<Dropout>(dropout, dropout_rng);
  mlp_drop2_ = std::make_unique<Dropout>(dropout, dropout_rng);
}

void TransformerBlock::collect_params(std::vector<Param*>& out) {
  ln1_->collect_params(out);
  attn_->collect_params(out);
  ln2_->collect_params(out);
  fc1_->collect_params(out);
  fc2_->collect_params(out);
}

Tensor TransformerBlock::forward(const Tensor& x, bool train) {
  if (x.ndim() != 3) throw ValueError("TransformerBlock: expected [N,L,D]");
  in_shape_ = x.shape();
  const int n = x.dim(0), l = x.dim(1);
  Tensor u = ln1_->forward(x.reshaped({n * l, dim_}), train);
  Tensor a = attn_->forward(std::move(u).reshaped({n, l, dim_}), train);
  Tensor y = add(x, a);
  Tensor m = ln2_->forward(y.reshaped({n * l, dim_}), train);
  m = fc1_->forward(m, train);
  m = gelu_->forward(m, train);
  m = mlp_drop1_->forward(m, train);
  m = fc2_->forward(m, train);
  m = mlp_drop2_->forward(m, train);
  return add(y, std::move(m).reshaped({n, l, dim_}));
}

Tensor TransformerBlock::backward(const Tensor& gy) {
  const int n = in_shape_[0], l = in_shape_[1];
  Tensor gm = mlp_drop2_->backward(gy.reshaped({n * l, dim_}));
  gm = fc2_->backward(gm);
  gm = mlp_drop1_->backward(gm);
  gm = gelu_->backward(gm);
  gm = fc1_->backward(gm);
  Tensor gyy = add(gy, std::move(ln2_->backward(gm)).reshaped({n, l, dim_}));
  Tensor ga = attn_->backward(gyy);
  Tensor gx = ln1_->backward(ga.reshaped({n * l, dim_}));
  return add(gyy, std::move(gx).reshaped({n, l, dim_}));
}

}  // namespace sod::nn
