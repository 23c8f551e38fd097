#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "sod/core/error.hpp"
#include "sod/core/grid.hpp"

namespace sod {

enum class SourcePool { DutsTr, Coco, OpenImages, Voc2012, Synthetic };
enum class Split { Train, Test };

std::string to_string(SourcePool p);
std::string to_string(Split s);
SourcePool source_pool_from_string(const std::string& s);
Split split_from_string(const std::string& s);

struct ImageRecord {
  std::string image_id;
  std::string path;
  int width = 0;
  int height = 0;
  SourcePool source_pool = SourcePool::Synthetic;
  Split split = Split::Train;
  // (parent category, subcategory) pairs; free-form strings.
  std::vector<std::pair<std::string, std::string>> categories;

  void validate() const {
    if (image_id.empty()) throw ValueError("ImageRecord: empty image_id");
    if (width < 1 || height < 1)
      throw ValueError("ImageRecord '" + image_id + "': width and height must be >= 1");
  }
};

// Real-valued prediction in [0, 1]. Construction rejects out-of-range values;
// there is deliberately no clamping constructor.
class SaliencyMap {
 public:
  SaliencyMap() = default;
  explicit SaliencyMap(RealGrid g) : g_(std::move(g)) {
    for (double x : g_.v)
      if (!(x >= 0.0 && x <= 1.0))
        throw ValueError("SaliencyMap: value outside [0,1]");
  }

  const RealGrid& grid() const { return g_; }
  int h() const { return g_.h; }
  int w() const { return g_.w; }

 private:
  RealGrid g_;
};

// Which phrase/box produced a region of a pseudo-label. Box is
// [x1, y1, x2, y2), half-open pixel coordinates.
struct MaskProvenance {
  std::string phrase;
  std::array<int, 4> box{0, 0, 0, 0};
  double logit = 0.0;
};

struct PseudoLabel {
  BinaryGrid mask;
  std::vector<MaskProvenance> provenance;
  bool empty_flagged = false;  // set when the pipeline produced no foreground
};

struct EdgeMap {
  BinaryGrid mask;
};

// 1 marks a pixel whose label is trusted. |J| = count_ones, |N| = h*w.
struct CertaintyMask {
  BinaryGrid mask;
  size_t certain_count() const { return mask.count_ones(); }
  size_t total_count() const { return static_cast<size_t>(mask.h) * mask.w; }
};

}  // namespace sod
