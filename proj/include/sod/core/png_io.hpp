#pragma once

#include <string>

#include "sod/core/grid.hpp"
#include "sod/core/image.hpp"
#include "sod/core/types.hpp"

namespace sod {

// Raw 8-bit codecs.
void write_png_gray8(const std::string& path, int h, int w, const uint8_t* data);
void write_png_rgb8(const std::string& path, const ImageRgb& img);
ImageRgb read_png_rgb8(const std::string& path);   // accepts gray or RGB input
void read_png_gray8(const std::string& path, int& h, int& w,
                    std::vector<uint8_t>& data);   // rejects non-gray input

// Binary masks are stored as 8-bit grayscale PNG, 0 -> 0 and 1 -> 255.
// read_mask is the exact inverse and rejects files with other values.
void write_mask(const BinaryGrid& mask, const std::string& path);
BinaryGrid read_mask(const std::string& path);

// Real-valued maps in [0,1] quantized to 0..255.
void write_gray_map(const RealGrid& map, const std::string& path);
RealGrid read_gray_map(const std::string& path);

// Benchmark ground truth: grayscale PNG binarized at 128.
BinaryGrid read_gt_mask(const std::string& path);

}  // namespace sod
