#include "sod/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sod/kernels/kernels.hpp"

namespace sod::eval {
namespace {

constexpr double kEps = 2.220446049250313e-16;

void check_shape(const RealGrid& y, const BinaryGrid& g, const char* who) {
  if (y.h != g.h || y.w != g.w)
    throw ValueError(std::string(who) + ": shape mismatch");
}

inline bool positive_at(double y, double t) {
  return t == 0.0 ? y > 0.0 : y >= t;
}

// Mean and sample std (N-1 normalization, 0 for N <= 1).
void mean_std(const std::vector<double>& xs, double& mean, double& stddev) {
  mean = 0.0;
  stddev = 0.0;
  if (xs.empty()) return;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  if (xs.size() < 2) return;
  double sq = 0.0;
  for (double x : xs) sq += (x - mean) * (x - mean);
  stddev = std::sqrt(sq / (static_cast<double>(xs.size()) - 1.0));
}

double object_score(const std::vector<double>& vals) {
  double x = 0.0, sigma = 0.0;
  mean_std(vals, x, sigma);
  return 2.0 * x / (x * x + 1.0 + sigma + kEps);
}

double s_object(const RealGrid& y, const BinaryGrid& g) {
  std::vector<double> fg, bg;
  fg.reserve(g.count_ones());
  bg.reserve(y.v.size() - g.count_ones());
  for (size_t i = 0; i < y.v.size(); ++i) {
    if (g.v[i])
      fg.push_back(y.v[i]);
    else
      bg.push_back(1.0 - y.v[i]);
  }
  const double mu =
      static_cast<double>(g.count_ones()) / static_cast<double>(y.v.size());
  return mu * object_score(fg) + (1.0 - mu) * object_score(bg);
}

double region_ssim(const RealGrid& y, const BinaryGrid& g, int y0, int y1,
                   int x0, int x1) {
  const int64_t n = static_cast<int64_t>(y1 - y0) * (x1 - x0);
  if (n <= 0) return 0.0;
  double mx = 0.0, my = 0.0;
  for (int yy = y0; yy < y1; ++yy)
    for (int xx = x0; xx < x1; ++xx) {
      mx += y.at(yy, xx);
      my += g.at(yy, xx);
    }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sx = 0.0, sy = 0.0, sxy = 0.0;
  for (int yy = y0; yy < y1; ++yy)
    for (int xx = x0; xx < x1; ++xx) {
      const double dx = y.at(yy, xx) - mx;
      const double dy = g.at(yy, xx) - my;
      sx += dx * dx;
      sy += dy * dy;
      sxy += dx * dy;
    }
  const double denom = static_cast<double>(n) - 1.0 + kEps;
  sx /= denom;
  sy /= denom;
  sxy /= denom;
  const double alpha = 4.0 * mx * my * sxy;
  const double beta = (mx * mx + my * my) * (sx + sy);
  if (alpha != 0.0) return alpha / (beta + kEps);
  return beta == 0.0 ? 1.0 : 0.0;
}

double s_region(const RealGrid& y, const BinaryGrid& g) {
  const int h = g.h, w = g.w;
  // Ground-truth centroid as 1-indexed cut sizes (rows/cols in quadrant 1).
  int cx, cy;
  const double total = static_cast<double>(g.count_ones());
  if (total == 0.0) {
    cx = static_cast<int>(std::lround(w / 2.0));
    cy = static_cast<int>(std::lround(h / 2.0));
  } else {
    double sx = 0.0, sy = 0.0;
    for (int yy = 0; yy < h; ++yy)
      for (int xx = 0; xx < w; ++xx)
        if (g.at(yy, xx)) {
          sx += xx + 1;
          sy += yy + 1;
        }
    cx = static_cast<int>(std::lround(sx / total));
    cy = static_cast<int>(std::lround(sy / total));
  }
  const double area = static_cast<double>(h) * w;
  const double w1 = (static_cast<double>(cx) * cy) / area;
  const double w2 = (static_cast<double>(w - cx) * cy) / area;
  const double w3 = (static_cast<double>(cx) * (h - cy)) / area;
  const double w4 = 1.0 - w1 - w2 - w3;
  return w1 * region_ssim(y, g, 0, cy, 0, cx) +
         w2 * region_ssim(y, g, 0, cy, cx, w) +
         w3 * region_ssim(y, g, cy, h, 0, cx) +
         w4 * region_ssim(y, g, cy, h, cx, w);
}

}  // namespace

std::vector<double> sweep_thresholds() {
  std::vector<double> ts(kSweepSize);
  for (int k = 0; k < kSweepSize; ++k) ts[static_cast<size_t>(k)] = k / 255.0;
  return ts;
}

SweepCounts sweep_counts(const RealGrid& y, const BinaryGrid& g) {
  check_shape(y, g, "sweep_counts");
  SweepCounts out;
  out.n = static_cast<int64_t>(y.v.size());
  out.gt_pos = static_cast<int64_t>(g.count_ones());
  out.pred_pos.assign(kSweepSize, 0);
  out.true_pos.assign(kSweepSize, 0);
  std::vector<double> ts = sweep_thresholds();
  // t = 0 means "strictly positive": the smallest positive double as the
  // >= threshold is exactly that predicate for values in [0, 1].
  ts[0] = std::numeric_limits<double>::denorm_min();
  kern::ops().threshold_counts(y.v.data(), g.v.data(), y.v.size(), ts.data(),
                               kSweepSize, out.pred_pos.data(),
                               out.true_pos.data());
  return out;
}

Prf prf_from_counts(int64_t tp, int64_t fp, int64_t fn) {
  Prf r;
  r.precision = (tp + fp) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  r.recall = (tp + fn) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  const double denom = kFBetaSq * r.precision + r.recall;
  r.f = denom > 0.0 ? (1.0 + kFBetaSq) * r.precision * r.recall / denom : 0.0;
  return r;
}

Prf f_measure_at(const RealGrid& y, const BinaryGrid& g, double t) {
  check_shape(y, g, "f_measure_at");
  if (t < 0.0 || t > 1.0) throw ValueError("f_measure_at: threshold outside [0,1]");
  if (g.count_ones() == 0)
    throw ValueError("f_measure_at: empty ground truth is excluded from F");
  int64_t tp = 0, fp = 0, fn = 0;
  for (size_t i = 0; i < y.v.size(); ++i) {
    const bool pos = positive_at(y.v[i], t);
    if (pos && g.v[i]) ++tp;
    else if (pos) ++fp;
    else if (g.v[i]) ++fn;
  }
  return prf_from_counts(tp, fp, fn);
}

double mae(const RealGrid& y, const BinaryGrid& g) {
  check_shape(y, g, "mae");
  double s = 0.0;
  for (size_t i = 0; i < y.v.size(); ++i)
    s += std::fabs(y.v[i] - static_cast<double>(g.v[i]));
  return s / static_cast<double>(y.v.size());
}

double e_from_counts(int64_t tp, int64_t fp, int64_t fn, int64_t tn, int64_t n) {
  const double mu_y = static_cast<double>(tp + fp) / static_cast<double>(n);
  const double mu_g = static_cast<double>(tp + fn) / static_cast<double>(n);
  const int64_t counts[4] = {tp, fp, fn, tn};
  const double gval[4] = {1.0, 0.0, 1.0, 0.0};
  const double yval[4] = {1.0, 1.0, 0.0, 0.0};
  double acc = 0.0;
  for (int c = 0; c < 4; ++c) {
    if (counts[c] == 0) continue;
    const double phi_g = gval[c] - mu_g;
    const double phi_y = yval[c] - mu_y;
    const double denom = phi_g * phi_g + phi_y * phi_y;
    double xi;
    if (denom == 0.0) {
      // both maps constant: aligned iff they are the same constant
      xi = gval[c] == yval[c] ? 1.0 : 0.0;
    } else {
      xi = 2.0 * phi_g * phi_y / denom;
    }
    const double enhanced = (1.0 + xi) * (1.0 + xi) / 4.0;
    acc += static_cast<double>(counts[c]) * enhanced;
  }
  return acc / static_cast<double>(n);
}

double e_measure_at(const RealGrid& y, const BinaryGrid& g, double t) {
  check_shape(y, g, "e_measure_at");
  int64_t tp = 0, fp = 0, fn = 0, tn = 0;
  for (size_t i = 0; i < y.v.size(); ++i) {
    const bool pos = positive_at(y.v[i], t);
    if (pos && g.v[i]) ++tp;
    else if (pos) ++fp;
    else if (g.v[i]) ++fn;
    else ++tn;
  }
  return e_from_counts(tp, fp, fn, tn, static_cast<int64_t>(y.v.size()));
}

double s_measure(const RealGrid& y, const BinaryGrid& g) {
  check_shape(y, g, "s_measure");
  const size_t fg = g.count_ones();
  double mean_y = 0.0;
  for (double v : y.v) mean_y += v;
  mean_y /= static_cast<double>(y.v.size());
  if (fg == 0) return 1.0 - mean_y;        // empty GT limit case
  if (fg == y.v.size()) return mean_y;     // full GT limit case
  const double q = 0.5 * s_object(y, g) + 0.5 * s_region(y, g);
  return std::max(q, 0.0);
}

DatasetEval dataset_metrics(const std::vector<RealGrid>& preds,
                            const std::vector<BinaryGrid>& gts,
                            const std::string& dataset_name) {
  if (preds.size() != gts.size())
    throw ValueError("dataset_metrics: prediction/ground-truth count mismatch");
  if (preds.empty()) throw ValueError("dataset_metrics: empty dataset");

  DatasetEval ev;
  ev.report.dataset = dataset_name;
  ev.report.n_images = static_cast<int>(preds.size());
  ev.pr.thresholds = sweep_thresholds();
  ev.pr.precision.assign(kSweepSize, 0.0);
  ev.pr.recall.assign(kSweepSize, 0.0);

  std::vector<double> sum_f(kSweepSize, 0.0), sum_e(kSweepSize, 0.0);
  double sum_mae = 0.0, sum_s = 0.0;
  int valid = 0;

  for (size_t i = 0; i < preds.size(); ++i) {
    const RealGrid& y = preds[i];
    const BinaryGrid& g = gts[i];
    sum_mae += mae(y, g);
    sum_s += s_measure(y, g);
    const SweepCounts c = sweep_counts(y, g);
    for (int t = 0; t < kSweepSize; ++t) {
      const int64_t tp = c.true_pos[static_cast<size_t>(t)];
      const int64_t fp = c.pred_pos[static_cast<size_t>(t)] - tp;
      const int64_t fn = c.gt_pos - tp;
      const int64_t tn = c.n - tp - fp - fn;
      sum_e[static_cast<size_t>(t)] += e_from_counts(tp, fp, fn, tn, c.n);
      if (c.gt_pos > 0) {
        const Prf r = prf_from_counts(tp, fp, fn);
        ev.pr.precision[static_cast<size_t>(t)] += r.precision;
        ev.pr.recall[static_cast<size_t>(t)] += r.recall;
        sum_f[static_cast<size_t>(t)] += r.f;
      }
    }
    if (c.gt_pos > 0)
      ++valid;
    else
      ++ev.report.n_empty_gt;
  }

  const double n_imgs = static_cast<double>(preds.size());
  ev.report.mae = sum_mae / n_imgs;
  ev.report.s = sum_s / n_imgs;
  double mean_f = 0.0, max_f = 0.0, mean_e = 0.0;
  for (int t = 0; t < kSweepSize; ++t) {
    mean_e += sum_e[static_cast<size_t>(t)] / n_imgs;
    if (valid > 0) {
      const double f = sum_f[static_cast<size_t>(t)] / valid;
      mean_f += f;
      max_f = std::max(max_f, f);
      ev.pr.precision[static_cast<size_t>(t)] /= valid;
      ev.pr.recall[static_cast<size_t>(t)] /= valid;
    }
  }
  ev.report.e = mean_e / kSweepSize;
  ev.report.mean_f = mean_f / kSweepSize;
  ev.report.max_f = max_f;
  return ev;
}

std::pair<double, double> mean_max_f(const std::vector<RealGrid>& preds,
                                     const std::vector<BinaryGrid>& gts) {
  const DatasetEval ev = dataset_metrics(preds, gts);
  return {ev.report.mean_f, ev.report.max_f};
}

double e_measure(const std::vector<RealGrid>& preds,
                 const std::vector<BinaryGrid>& gts) {
  return dataset_metrics(preds, gts).report.e;
}

PRCurve pr_curve(const std::vector<RealGrid>& preds,
                 const std::vector<BinaryGrid>& gts) {
  return dataset_metrics(preds, gts).pr;
}

}  // namespace sod::eval
