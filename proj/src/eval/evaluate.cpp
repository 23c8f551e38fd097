#include "sod/eval/evaluate.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "sod/core/image.hpp"
#include "sod/core/png_io.hpp"
#include "sod/plot/plot.hpp"

namespace sod::eval {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<std::string> png_names(const std::string& dir) {
  if (!fs::is_directory(dir)) throw IoError("'" + dir + "' is not a directory");
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    if (entry.path().extension() == ".png") names.push_back(entry.path().filename());
  }
  std::sort(names.begin(), names.end());
  return names;
}

}  // namespace

DatasetEval evaluate_dataset(const std::string& pred_dir,
                             const std::string& gt_dir,
                             const std::string& dataset_name) {
  const std::vector<std::string> preds = png_names(pred_dir);
  const std::vector<std::string> gts = png_names(gt_dir);
  for (const std::string& name : preds)
    if (!std::binary_search(gts.begin(), gts.end(), name))
      throw IoError("prediction '" + name + "' has no ground truth in " + gt_dir);
  for (const std::string& name : gts)
    if (!std::binary_search(preds.begin(), preds.end(), name))
      throw IoError("ground truth '" + name + "' has no prediction in " + pred_dir);
  if (gts.empty()) throw IoError("no PNG files found in '" + gt_dir + "'");

  std::vector<RealGrid> pred_maps;
  std::vector<BinaryGrid> gt_masks;
  int n_resized = 0;
  pred_maps.reserve(gts.size());
  gt_masks.reserve(gts.size());
  for (const std::string& name : gts) {
    RealGrid y = read_gray_map(fs::path(pred_dir) / name);
    BinaryGrid g = read_gt_mask(fs::path(gt_dir) / name);
    if (y.h != g.h || y.w != g.w) {
      y = resize_bilinear(y, g.h, g.w);
      ++n_resized;
    }
    pred_maps.push_back(std::move(y));
    gt_masks.push_back(std::move(g));
  }
  DatasetEval ev = dataset_metrics(pred_maps, gt_masks, dataset_name);
  ev.report.n_resized = n_resized;
  return ev;
}

void write_report_json(const DatasetEval& ev, const std::string& path) {
  json j = {{"dataset", ev.report.dataset},
            {"n_images", ev.report.n_images},
            {"S", ev.report.s},
            {"meanF", ev.report.mean_f},
            {"maxF", ev.report.max_f},
            {"E", ev.report.e},
            {"MAE", ev.report.mae},
            {"flags",
             {{"resized", ev.report.n_resized}, {"empty_gt", ev.report.n_empty_gt}}},
            {"pr",
             {{"thresholds", ev.pr.thresholds},
              {"precision", ev.pr.precision},
              {"recall", ev.pr.recall}}}};
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << j.dump(2) << '\n';
}

DatasetEval read_report_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open report '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw IoError("'" + path + "': bad report JSON: " + e.what());
  }
  DatasetEval ev;
  ev.report.dataset = j.at("dataset").get<std::string>();
  ev.report.n_images = j.at("n_images").get<int>();
  ev.report.s = j.at("S").get<double>();
  ev.report.mean_f = j.at("meanF").get<double>();
  ev.report.max_f = j.at("maxF").get<double>();
  ev.report.e = j.at("E").get<double>();
  ev.report.mae = j.at("MAE").get<double>();
  ev.report.n_resized = j.at("flags").at("resized").get<int>();
  ev.report.n_empty_gt = j.at("flags").at("empty_gt").get<int>();
  ev.pr.thresholds = j.at("pr").at("thresholds").get<std::vector<double>>();
  ev.pr.precision = j.at("pr").at("precision").get<std::vector<double>>();
  ev.pr.recall = j.at("pr").at("recall").get<std::vector<double>>();
  return ev;
}

void write_pr_csv(const PRCurve& pr, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "threshold,precision,recall\n";
  char buf[96];
  for (size_t i = 0; i < pr.thresholds.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", pr.thresholds[i],
                  pr.precision[i], pr.recall[i]);
    out << buf;
  }
}

void write_eval_outputs(const DatasetEval& ev, const std::string& out_dir) {
  fs::create_directories(out_dir);
  write_report_json(ev, (fs::path(out_dir) / "report.json").string());
  write_pr_csv(ev.pr, (fs::path(out_dir) / "pr.csv").string());
  plot::Series s;
  s.label = ev.report.dataset.empty() ? "run" : ev.report.dataset;
  s.x = ev.pr.recall;
  s.y = ev.pr.precision;
  plot::save_xy_plot((fs::path(out_dir) / "pr.png").string(), {s}, "R", "P");
}

}  // namespace sod::eval
