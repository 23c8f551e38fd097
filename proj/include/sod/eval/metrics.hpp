#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sod/core/grid.hpp"

namespace sod::eval {

// Threshold sweep convention used by the F/E/PR sweeps: 256 thresholds
// t_k = k/255. A pixel counts as positive when y >= t, except at t = 0 where
// strictly-greater is required so binary maps binarize to themselves at every
// grid point (an all-background prediction stays empty in the sweep).
inline constexpr int kSweepSize = 256;
inline constexpr double kFBetaSq = 0.3;

std::vector<double> sweep_thresholds();

struct SweepCounts {
  int64_t n = 0;       // pixels per image
  int64_t gt_pos = 0;  // foreground pixels in the ground truth
  std::vector<int64_t> pred_pos;  // per threshold
  std::vector<int64_t> true_pos;  // per threshold
};

SweepCounts sweep_counts(const RealGrid& y, const BinaryGrid& g);

struct Prf {
  double precision = 0.0, recall = 0.0, f = 0.0;
};

Prf prf_from_counts(int64_t tp, int64_t fp, int64_t fn);

// Binarize y at t, count, and combine with beta^2 = 0.3. The ground truth
// must be nonempty (empty-GT images are excluded from F aggregation).
Prf f_measure_at(const RealGrid& y, const BinaryGrid& g, double t);

double mae(const RealGrid& y, const BinaryGrid& g);

// Enhanced-alignment value for one image at one threshold, computed from the
// confusion counts (the alignment map takes one value per (g, y) combination).
double e_from_counts(int64_t tp, int64_t fp, int64_t fn, int64_t tn, int64_t n);
double e_measure_at(const RealGrid& y, const BinaryGrid& g, double t);

// Structure measure on the continuous prediction, alpha = 0.5.
double s_measure(const RealGrid& y, const BinaryGrid& g);

struct PRCurve {
  std::vector<double> thresholds, precision, recall;
};

struct MetricReport {
  std::string dataset;
  int n_images = 0;
  double s = 0.0, mean_f = 0.0, max_f = 0.0, e = 0.0, mae = 0.0;
  int n_resized = 0;   // predictions resized to the GT resolution
  int n_empty_gt = 0;  // images excluded from F/PR aggregation
};

struct DatasetEval {
  MetricReport report;
  PRCurve pr;
};

// Aggregate metrics over aligned prediction/ground-truth lists.
DatasetEval dataset_metrics(const std::vector<RealGrid>& preds,
                            const std::vector<BinaryGrid>& gts,
                            const std::string& dataset_name = "");

// Convenience wrappers over dataset_metrics.
std::pair<double, double> mean_max_f(const std::vector<RealGrid>& preds,
                                     const std::vector<BinaryGrid>& gts);
double e_measure(const std::vector<RealGrid>& preds,
                 const std::vector<BinaryGrid>& gts);
PRCurve pr_curve(const std::vector<RealGrid>& preds,
                 const std::vector<BinaryGrid>& gts);

}  // namespace sod::eval
