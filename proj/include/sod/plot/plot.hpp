#pragma once

#include <array>
#include <string>
#include <vector>

#include "sod/core/image.hpp"

namespace sod::plot {

using Color = std::array<uint8_t, 3>;

inline constexpr Color kPalette[] = {
    {214, 69, 65},  {31, 119, 180}, {44, 160, 44},  {255, 127, 14},
    {148, 103, 189}, {140, 86, 75},  {23, 190, 207}, {188, 189, 34},
};

// Minimal raster plotting: enough for PR curves and count histograms.
class Canvas {
 public:
  Canvas(int h, int w, Color bg = {255, 255, 255});

  void line(int y0, int x0, int y1, int x1, Color c);
  void fill_rect(int y0, int x0, int y1, int x1, Color c);
  // 5x7 bitmap glyphs: digits, '.', '-', and a few letters for axis labels.
  void text(int y, int x, const std::string& s, Color c, int scale = 1);

  const ImageRgb& image() const { return img_; }
  void save(const std::string& path) const;

 private:
  ImageRgb img_;
};

struct Series {
  std::string label;
  std::vector<double> x, y;
};

// Line chart over [0,1] x [0,1] with ticks at 0, 0.5, 1.
void save_xy_plot(const std::string& path, const std::vector<Series>& series,
                  const std::string& x_label, const std::string& y_label);

// Vertical bar chart of labelled counts.
void save_histogram(const std::string& path, const std::vector<double>& values,
                    const std::string& title);

}  // namespace sod::plot
