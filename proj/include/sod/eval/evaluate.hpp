#pragma once

#include <string>

#include "sod/eval/metrics.hpp"

namespace sod::eval {

// Evaluates every prediction in pred_dir against the same-named PNG in
// gt_dir. Predictions are grayscale [0,1] maps, ground truth is binarized at
// 128. A size mismatch resizes the prediction to the GT size (bilinear) and
// is counted in the report flags. A file present on one side only is an error.
DatasetEval evaluate_dataset(const std::string& pred_dir,
                             const std::string& gt_dir,
                             const std::string& dataset_name = "");

void write_report_json(const DatasetEval& ev, const std::string& path);
DatasetEval read_report_json(const std::string& path);
void write_pr_csv(const PRCurve& pr, const std::string& path);

// report.json beside pr.csv and pr.png under out_dir.
void write_eval_outputs(const DatasetEval& ev, const std::string& out_dir);

}  // namespace sod::eval
