#pragma once

#include <string>
#include <vector>

#include "sod/core/grid.hpp"
#include "sod/core/types.hpp"
#include "sod/phrase/phrase.hpp"

namespace sod::labelgen {

// Confidence-scored detection box, [x1, x2) x [y1, y2) in pixel coordinates.
struct ScoredBox {
  int x1 = 0, y1 = 0, x2 = 0, y2 = 0;
  double logit = 0.0;
  phrase::Phrase source_phrase;

  void validate(int image_w, int image_h) const {
    if (x1 >= x2 || y1 >= y2)
      throw ValueError("ScoredBox: degenerate box [" + std::to_string(x1) + "," +
                       std::to_string(y1) + "," + std::to_string(x2) + "," +
                       std::to_string(y2) + "]");
    if (x1 < 0 || y1 < 0 || x2 > image_w || y2 > image_h)
      throw ValueError("ScoredBox: box outside image bounds");
    if (!(logit >= 0.0 && logit <= 1.0))
      throw ValueError("ScoredBox: logit outside [0,1]");
  }
};

struct ScoredBoxSet {
  std::string image_id;
  std::vector<ScoredBox> boxes;  // may be empty: signals pipeline failure downstream
};

// Keeps exactly the boxes with logit >= tau, preserving order.
ScoredBoxSet filter_boxes(const ScoredBoxSet& bs, double tau);

// Pixelwise OR. An empty list yields an all-zero label flagged empty.
PseudoLabel fuse_masks(const std::vector<BinaryGrid>& masks,
                       std::vector<MaskProvenance> provenance, int h, int w);

}  // namespace sod::labelgen
