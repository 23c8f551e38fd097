#pragma once

#include "sod/core/grid.hpp"
#include "sod/core/types.hpp"

namespace sod::loss {

inline constexpr double kProbEps = 1e-7;  // predictions clamp to [eps, 1-eps]

struct LossWeights {
  double alpha1 = 1.0;  // binary cross-entropy
  double alpha2 = 1.0;  // partial binary cross-entropy
  double alpha3 = 1.0;  // IoU
  double lambda_edge = 1.0;

  void validate() const {
    if (alpha1 < 0 || alpha2 < 0 || alpha3 < 0 || lambda_edge < 0)
      throw ValueError("LossWeights: weights must be nonnegative");
  }
};

// Mean over pixels of -[g log y + (1-g) log(1-y)].
double bce(const RealGrid& y, const BinaryGrid& g);
// d(bce)/dy, same shape as y.
RealGrid bce_grad(const RealGrid& y, const BinaryGrid& g);

// Mean of the cross-entropy terms over the certain pixels only.
double pbce(const RealGrid& y, const BinaryGrid& g, const CertaintyMask& j);
RealGrid pbce_grad(const RealGrid& y, const BinaryGrid& g, const CertaintyMask& j);

// 1 - soft IoU; 0 when both maps are empty.
double iou_loss(const RealGrid& y, const BinaryGrid& g);
RealGrid iou_loss_grad(const RealGrid& y, const BinaryGrid& g);

// bce(sigmoid(logits), e), plus its gradient w.r.t. the logits.
double edge_loss(const RealGrid& edge_logits, const EdgeMap& e);
RealGrid edge_loss_grad(const RealGrid& edge_logits, const EdgeMap& e);

struct TotalLossParts {
  double bce = 0.0, pbce = 0.0, iou = 0.0, edge = 0.0;
  double total = 0.0;
};

// alpha1*bce + alpha2*pbce + alpha3*iou (+ lambda_edge*edge when edge logits
// are provided).
TotalLossParts total_loss(const RealGrid& y, const BinaryGrid& g,
                          const CertaintyMask& j, const RealGrid* edge_logits,
                          const EdgeMap* e, const LossWeights& w);

}  // namespace sod::loss
