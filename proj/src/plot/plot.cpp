#include "sod/plot/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "sod/core/png_io.hpp"

namespace sod::plot {
namespace {

// 5x7 glyphs, row-major bits (LSB = leftmost column).
struct Glyph {
  char ch;
  uint8_t rows[7];
};

constexpr Glyph kGlyphs[] = {
    {'0', {0x0E, 0x11, 0x19, 0x15, 0x13, 0x11, 0x0E}},
    {'1', {0x04, 0x06, 0x04, 0x04, 0x04, 0x04, 0x0E}},
    {'2', {0x0E, 0x11, 0x10, 0x08, 0x04, 0x02, 0x1F}},
    {'3', {0x0E, 0x11, 0x10, 0x0C, 0x10, 0x11, 0x0E}},
    {'4', {0x08, 0x0C, 0x0A, 0x09, 0x1F, 0x08, 0x08}},
    {'5', {0x1F, 0x01, 0x0F, 0x10, 0x10, 0x11, 0x0E}},
    {'6', {0x0C, 0x02, 0x01, 0x0F, 0x11, 0x11, 0x0E}},
    {'7', {0x1F, 0x10, 0x08, 0x04, 0x02, 0x02, 0x02}},
    {'8', {0x0E, 0x11, 0x11, 0x0E, 0x11, 0x11, 0x0E}},
    {'9', {0x0E, 0x11, 0x11, 0x1E, 0x10, 0x08, 0x06}},
    {'.', {0x00, 0x00, 0x00, 0x00, 0x00, 0x06, 0x06}},
    {'-', {0x00, 0x00, 0x00, 0x1F, 0x00, 0x00, 0x00}},
    {'=', {0x00, 0x00, 0x1F, 0x00, 0x1F, 0x00, 0x00}},
    {' ', {0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00}},
    {'P', {0x0F, 0x11, 0x11, 0x0F, 0x01, 0x01, 0x01}},
    {'R', {0x0F, 0x11, 0x11, 0x0F, 0x05, 0x09, 0x11}},
    {'E', {0x1F, 0x01, 0x01, 0x0F, 0x01, 0x01, 0x1F}},
    {'F', {0x1F, 0x01, 0x01, 0x0F, 0x01, 0x01, 0x01}},
    {'T', {0x1F, 0x04, 0x04, 0x04, 0x04, 0x04, 0x04}},
    {'C', {0x0E, 0x11, 0x01, 0x01, 0x01, 0x11, 0x0E}},
    {'N', {0x11, 0x13, 0x15, 0x19, 0x11, 0x11, 0x11}},
    {'O', {0x0E, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E}},
    {'U', {0x11, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E}},
    {'S', {0x1E, 0x01, 0x01, 0x0E, 0x10, 0x10, 0x0F}},
};

const Glyph* find_glyph(char ch) {
  for (const Glyph& g : kGlyphs)
    if (g.ch == ch) return &g;
  return nullptr;
}

}  // namespace

Canvas::Canvas(int h, int w, Color bg) : img_(h, w) {
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) img_.set(y, x, bg);
}

void Canvas::line(int y0, int x0, int y1, int x1, Color c) {
  const int dx = std::abs(x1 - x0), dy = -std::abs(y1 - y0);
  const int sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1;
  int err = dx + dy;
  int x = x0, y = y0;
  while (true) {
    if (y >= 0 && y < img_.h && x >= 0 && x < img_.w) img_.set(y, x, c);
    if (x == x1 && y == y1) break;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y += sy;
    }
  }
}

void Canvas::fill_rect(int y0, int x0, int y1, int x1, Color c) {
  for (int y = std::max(0, y0); y <= std::min(img_.h - 1, y1); ++y)
    for (int x = std::max(0, x0); x <= std::min(img_.w - 1, x1); ++x)
      img_.set(y, x, c);
}

void Canvas::text(int y, int x, const std::string& s, Color c, int scale) {
  int cx = x;
  for (char ch : s) {
    const Glyph* g = find_glyph(static_cast<char>(std::toupper(ch)));
    if (g) {
      for (int ry = 0; ry < 7; ++ry)
        for (int rx = 0; rx < 5; ++rx)
          if (g->rows[ry] & (1 << rx))
            fill_rect(y + ry * scale, cx + rx * scale, y + (ry + 1) * scale - 1,
                      cx + (rx + 1) * scale - 1, c);
    }
    cx += 6 * scale;
  }
}

void Canvas::save(const std::string& path) const { write_png_rgb8(path, img_); }

void save_xy_plot(const std::string& path, const std::vector<Series>& series,
                  const std::string& x_label, const std::string& y_label) {
  const int size = 512, margin = 48;
  Canvas canvas(size, size);
  const int lo = margin, hi = size - margin;
  const Color axis{60, 60, 60}, grid{225, 225, 225};

  for (int i = 0; i <= 4; ++i) {
    const int p = lo + (hi - lo) * i / 4;
    canvas.line(p, lo, p, hi, grid);
    canvas.line(lo, p, hi, p, grid);
  }
  canvas.line(hi, lo, hi, hi, axis);
  canvas.line(lo, lo, hi, lo, axis);
  canvas.text(hi + 8, lo - 6, "0", axis);
  canvas.text(hi + 8, (lo + hi) / 2 - 9, "0.5", axis);
  canvas.text(hi + 8, hi - 6, "1", axis);
  canvas.text(hi - 3, lo - 30, "0", axis);
  canvas.text(lo - 3, lo - 30, "1", axis);
  canvas.text(hi + 24, (lo + hi) / 2 - 3 * static_cast<int>(x_label.size()),
              x_label, axis);
  canvas.text(lo - 24, lo, y_label, axis);

  auto to_px = [&](double v) {
    return static_cast<int>(std::lround(hi - (hi - lo) * std::clamp(v, 0.0, 1.0)));
  };
  for (size_t s = 0; s < series.size(); ++s) {
    const Color c = kPalette[s % std::size(kPalette)];
    const Series& sr = series[s];
    for (size_t i = 1; i < sr.x.size(); ++i)
      canvas.line(to_px(sr.y[i - 1]),
                  lo + (hi - lo) - (to_px(sr.x[i - 1]) - lo),
                  to_px(sr.y[i]), lo + (hi - lo) - (to_px(sr.x[i]) - lo), c);
    canvas.fill_rect(lo + 14 * static_cast<int>(s), hi - 80,
                     lo + 14 * static_cast<int>(s) + 8, hi - 72, c);
    canvas.text(lo + 14 * static_cast<int>(s), hi - 66, sr.label, c);
  }
  canvas.save(path);
}

void save_histogram(const std::string& path, const std::vector<double>& values,
                    const std::string& title) {
  const int bar_w = 14, margin = 40;
  const int w = std::max(256, margin * 2 + bar_w * static_cast<int>(values.size()));
  const int h = 256;
  Canvas canvas(h, w);
  const Color axis{60, 60, 60};
  double vmax = 1.0;
  for (double v : values) vmax = std::max(vmax, v);
  for (size_t i = 0; i < values.size(); ++i) {
    const int bh = static_cast<int>(std::lround((h - 2 * margin) * values[i] / vmax));
    const int x0 = margin + static_cast<int>(i) * bar_w;
    canvas.fill_rect(h - margin - bh, x0 + 2, h - margin, x0 + bar_w - 2,
                     kPalette[1]);
  }
  canvas.line(h - margin, margin - 4, h - margin,
              margin + bar_w * static_cast<int>(values.size()), axis);
  canvas.text(8, margin, title, axis);
  canvas.save(path);
}

}  // namespace sod::plot
