#pragma once

#include "sod/core/types.hpp"

namespace sod::loss {

// Fixed-parameter Canny, used to derive edge supervision from binary masks:
// Gaussian smoothing (sigma 1.4), 3x3 Sobel gradients, 4-sector non-maximum
// suppression, hysteresis at 0.1/0.3 of the peak gradient magnitude.
// Deterministic; shift-equivariant for content away from the border.
EdgeMap edge_target(const PseudoLabel& label);
BinaryGrid canny_edges(const BinaryGrid& mask);

// Certain pixels: everything outside a `band` Chebyshev-radius band around
// the mask boundary (dilation XOR erosion with a square structuring element).
CertaintyMask certainty_mask(const BinaryGrid& mask, int band = 5);

BinaryGrid dilate(const BinaryGrid& mask, int radius);
BinaryGrid erode(const BinaryGrid& mask, int radius);

}  // namespace sod::loss
