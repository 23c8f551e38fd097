#include "sod/loss/losses.hpp"

#include <algorithm>
#include <cmath>

namespace sod::loss {
namespace {

inline double clamp_prob(double y) {
  return std::clamp(y, kProbEps, 1.0 - kProbEps);
}

void check_shape(const RealGrid& y, const BinaryGrid& g, const char* who) {
  if (y.h != g.h || y.w != g.w)
    throw ValueError(std::string(who) + ": shape mismatch " +
                     std::to_string(y.h) + "x" + std::to_string(y.w) + " vs " +
                     std::to_string(g.h) + "x" + std::to_string(g.w));
}

}  // namespace

double bce(const RealGrid& y, const BinaryGrid& g) {
  check_shape(y, g, "bce");
  double s = 0.0;
  for (size_t i = 0; i < y.v.size(); ++i) {
    const double p = clamp_prob(y.v[i]);
    s += g.v[i] ? -std::log(p) : -std::log1p(-p);
  }
  return s / static_cast<double>(y.v.size());
}

RealGrid bce_grad(const RealGrid& y, const BinaryGrid& g) {
  check_shape(y, g, "bce");
  RealGrid out(y.h, y.w);
  const double inv_n = 1.0 / static_cast<double>(y.v.size());
  for (size_t i = 0; i < y.v.size(); ++i) {
    const double p = clamp_prob(y.v[i]);
    // zero gradient inside the clamp bands
    if (y.v[i] <= kProbEps || y.v[i] >= 1.0 - kProbEps) {
      out.v[i] = 0.0;
      continue;
    }
    out.v[i] = inv_n * (g.v[i] ? -1.0 / p : 1.0 / (1.0 - p));
  }
  return out;
}

double pbce(const RealGrid& y, const BinaryGrid& g, const CertaintyMask& j) {
  check_shape(y, g, "pbce");
  if (j.mask.h != y.h || j.mask.w != y.w)
    throw ValueError("pbce: certainty mask shape mismatch");
  const size_t certain = j.certain_count();
  if (certain == 0) throw ValueError("pbce: empty certainty set");
  double s = 0.0;
  for (size_t i = 0; i < y.v.size(); ++i) {
    if (!j.mask.v[i]) continue;
    const double p = clamp_prob(y.v[i]);
    s += g.v[i] ? -std::log(p) : -std::log1p(-p);
  }
  return s / static_cast<double>(certain);
}

RealGrid pbce_grad(const RealGrid& y, const BinaryGrid& g, const CertaintyMask& j) {
  check_shape(y, g, "pbce");
  const size_t certain = j.certain_count();
  if (certain == 0) throw ValueError("pbce: empty certainty set");
  RealGrid out(y.h, y.w);
  const double inv_j = 1.0 / static_cast<double>(certain);
  for (size_t i = 0; i < y.v.size(); ++i) {
    if (!j.mask.v[i]) continue;
    if (y.v[i] <= kProbEps || y.v[i] >= 1.0 - kProbEps) continue;
    const double p = clamp_prob(y.v[i]);
    out.v[i] = inv_j * (g.v[i] ? -1.0 / p : 1.0 / (1.0 - p));
  }
  return out;
}

double iou_loss(const RealGrid& y, const BinaryGrid& g) {
  check_shape(y, g, "iou_loss");
  double inter = 0.0, uni = 0.0;
  for (size_t i = 0; i < y.v.size(); ++i) {
    const double p = y.v[i], t = g.v[i];
    inter += p * t;
    uni += p + t - p * t;
  }
  if (uni == 0.0) return 0.0;
  return 1.0 - inter / uni;
}

RealGrid iou_loss_grad(const RealGrid& y, const BinaryGrid& g) {
  check_shape(y, g, "iou_loss");
  RealGrid out(y.h, y.w);
  double inter = 0.0, uni = 0.0;
  for (size_t i = 0; i < y.v.size(); ++i) {
    const double p = y.v[i], t = g.v[i];
    inter += p * t;
    uni += p + t - p * t;
  }
  if (uni == 0.0) return out;
  // d/dy (1 - I/U) = -(g*U - I*(1-g)) / U^2
  const double u2 = uni * uni;
  for (size_t i = 0; i < y.v.size(); ++i) {
    const double t = g.v[i];
    out.v[i] = -(t * uni - inter * (1.0 - t)) / u2;
  }
  return out;
}

double edge_loss(const RealGrid& edge_logits, const EdgeMap& e) {
  RealGrid prob(edge_logits.h, edge_logits.w);
  for (size_t i = 0; i < prob.v.size(); ++i)
    prob.v[i] = 1.0 / (1.0 + std::exp(-edge_logits.v[i]));
  return bce(prob, e.mask);
}

RealGrid edge_loss_grad(const RealGrid& edge_logits, const EdgeMap& e) {
  if (edge_logits.h != e.mask.h || edge_logits.w != e.mask.w)
    throw ValueError("edge_loss: shape mismatch");
  RealGrid out(edge_logits.h, edge_logits.w);
  const double inv_n = 1.0 / static_cast<double>(out.v.size());
  for (size_t i = 0; i < out.v.size(); ++i) {
    const double p = 1.0 / (1.0 + std::exp(-edge_logits.v[i]));
    // d bce(sigmoid(z), e)/dz = (p - e)/N away from the clamp bands
    if (p <= kProbEps || p >= 1.0 - kProbEps) continue;
    out.v[i] = inv_n * (p - static_cast<double>(e.mask.v[i]));
  }
  return out;
}

TotalLossParts total_loss(const RealGrid& y, const BinaryGrid& g,
                          const CertaintyMask& j, const RealGrid* edge_logits,
                          const EdgeMap* e, const LossWeights& w) {
  w.validate();
  TotalLossParts parts;
  parts.bce = bce(y, g);
  parts.pbce = pbce(y, g, j);
  parts.iou = iou_loss(y, g);
  parts.total = w.alpha1 * parts.bce + w.alpha2 * parts.pbce + w.alpha3 * parts.iou;
  if (edge_logits != nullptr) {
    if (e == nullptr) throw ValueError("total_loss: edge logits without target");
    parts.edge = edge_loss(*edge_logits, *e);
    parts.total += w.lambda_edge * parts.edge;
  }
  return parts;
}

}  // namespace sod::loss
