#include "sod/synth/generator.hpp"

#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "sod/core/manifest.hpp"
#include "sod/core/png_io.hpp"
#include "sod/core/rng.hpp"

namespace sod::synth {

namespace fs = std::filesystem;
using nlohmann::json;

const std::vector<PaletteColor>& palette() {
  static const std::vector<PaletteColor> p = {
      {"red", {200, 30, 30}},    {"green", {30, 160, 60}},
      {"blue", {40, 80, 200}},   {"yellow", {220, 200, 40}},
      {"cyan", {40, 190, 190}},  {"magenta", {190, 40, 190}},
      {"orange", {230, 140, 30}}, {"white", {240, 240, 240}},
  };
  return p;
}

std::string to_string(ShapeKind k) {
  switch (k) {
    case ShapeKind::Disc: return "disc";
    case ShapeKind::Square: return "square";
    case ShapeKind::Triangle: return "triangle";
  }
  throw ValueError("bad ShapeKind");
}

namespace {

bool inside_shape(const Shape& s, int y, int x) {
  const int dy = y - s.cy, dx = x - s.cx;
  switch (s.kind) {
    case ShapeKind::Disc:
      return dy * dy + dx * dx <= s.half * s.half;
    case ShapeKind::Square:
      return std::abs(dy) <= s.half && std::abs(dx) <= s.half;
    case ShapeKind::Triangle: {
      // upward isoceles: apex at cy-half, base at cy+half
      if (dy < -s.half || dy > s.half) return false;
      const double halfwidth = (dy + s.half) * 0.5;
      return std::abs(dx) <= halfwidth;
    }
  }
  return false;
}

phrase::Phrase phrase_of(const Shape& s) {
  phrase::Phrase p;
  p.adjective = palette()[static_cast<size_t>(s.color)].name;
  p.noun = to_string(s.kind);
  return p;
}

bool boxes_overlap(const Shape& a, const Shape& b, int gap) {
  return std::abs(a.cy - b.cy) <= a.half + b.half + gap &&
         std::abs(a.cx - b.cx) <= a.half + b.half + gap;
}

}  // namespace

void draw_shape(ImageRgb& img, const Shape& s) {
  const auto& c = palette()[static_cast<size_t>(s.color)].rgb;
  for (int y = 0; y < img.h; ++y)
    for (int x = 0; x < img.w; ++x)
      if (inside_shape(s, y, x)) img.set(y, x, c);
}

void rasterize_shape(BinaryGrid& mask, const Shape& s) {
  for (int y = 0; y < mask.h; ++y)
    for (int x = 0; x < mask.w; ++x)
      if (inside_shape(s, y, x)) mask.at(y, x) = 1;
}

SynthImage make_image(const std::string& image_id, int hw, uint64_t seed,
                      int max_shapes) {
  Rng rng(fnv1a64(image_id, seed ^ 0x5375bfb1170cbd1fULL));
  SynthImage out;
  out.image = ImageRgb(hw, hw);
  for (int y = 0; y < hw; ++y)
    for (int x = 0; x < hw; ++x) out.image.set(y, x, kBackground);
  out.gt = BinaryGrid(hw, hw);

  const int n_shapes = static_cast<int>(rng.uniform_int(1, max_shapes));
  const int margin = std::max(3, hw / 16);
  for (int k = 0; k < n_shapes; ++k) {
    for (int attempt = 0; attempt < 64; ++attempt) {
      Shape s;
      s.kind = static_cast<ShapeKind>(rng.uniform_int(0, 2));
      s.color = static_cast<int>(rng.uniform_int(0, static_cast<int64_t>(palette().size()) - 1));
      s.half = static_cast<int>(rng.uniform_int(hw / 6, hw / 4));
      s.cy = static_cast<int>(rng.uniform_int(margin + s.half, hw - 1 - margin - s.half));
      s.cx = static_cast<int>(rng.uniform_int(margin + s.half, hw - 1 - margin - s.half));
      bool ok = true;
      for (const Shape& other : out.shapes) {
        if (boxes_overlap(s, other, 2)) ok = false;
        // same (color, kind) would produce a duplicate phrase
        if (other.color == s.color && other.kind == s.kind) ok = false;
      }
      if (!ok) continue;
      out.shapes.push_back(s);
      break;
    }
  }
  // placement can fail on small canvases; one shape always fits
  if (out.shapes.empty()) {
    Shape s;
    s.kind = ShapeKind::Disc;
    s.color = 0;
    s.half = hw / 5;
    s.cy = s.cx = hw / 2;
    out.shapes.push_back(s);
  }

  out.phrases.image_id = image_id;
  out.phrases.origin = phrase::PhraseOrigin::Manual;
  for (const Shape& s : out.shapes) {
    draw_shape(out.image, s);
    rasterize_shape(out.gt, s);
    out.phrases.phrases.push_back(phrase_of(s));
  }
  return out;
}

SynthImage make_disambiguation_image(const std::string& image_id, int hw) {
  SynthImage out;
  out.image = ImageRgb(hw, hw);
  for (int y = 0; y < hw; ++y)
    for (int x = 0; x < hw; ++x) out.image.set(y, x, kBackground);
  out.gt = BinaryGrid(hw, hw);

  Shape salient;  // red disc, annotated
  salient.kind = ShapeKind::Disc;
  salient.color = 0;
  salient.half = hw / 5;
  salient.cy = hw / 2;
  salient.cx = hw / 4 + 1;

  Shape distractor;  // blue disc, same noun, not annotated
  distractor.kind = ShapeKind::Disc;
  distractor.color = 2;
  distractor.half = hw / 5;
  distractor.cy = hw / 2;
  distractor.cx = 3 * hw / 4 - 1;

  draw_shape(out.image, salient);
  draw_shape(out.image, distractor);
  rasterize_shape(out.gt, salient);
  out.shapes.push_back(salient);

  out.phrases.image_id = image_id;
  out.phrases.origin = phrase::PhraseOrigin::Manual;
  out.phrases.phrases.push_back(phrase_of(salient));
  return out;
}

SynthSet make_set(int n, int hw, uint64_t seed, int max_shapes) {
  SynthSet set;
  for (int i = 0; i < n; ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "synth_%04d", i);
    SynthImage img = make_image(id, hw, seed, max_shapes);
    ImageRecord rec;
    rec.image_id = id;
    rec.width = hw;
    rec.height = hw;
    rec.source_pool = SourcePool::Synthetic;
    rec.split = Split::Train;
    for (const Shape& s : img.shapes)
      rec.categories.emplace_back(to_string(s.kind),
                                  palette()[static_cast<size_t>(s.color)].name +
                                      " " + to_string(s.kind));
    set.records.push_back(std::move(rec));
    set.images.push_back(std::move(img));
  }
  return set;
}

void write_captioner_fixtures(const SynthSet& set, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  for (const SynthImage& img : set.images) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(content_hash(img.image)));
    json phrases = json::array();
    for (const phrase::Phrase& p : img.phrases.phrases)
      phrases.push_back(phrase::format_phrase(p));
    out << json{{"hash", buf}, {"phrases", phrases}}.dump() << '\n';
  }
}

void write_set(const SynthSet& set, const std::string& dir) {
  fs::create_directories(fs::path(dir) / "images");
  fs::create_directories(fs::path(dir) / "gt");
  std::vector<ImageRecord> records = set.records;
  std::vector<phrase::PhraseSet> phrase_sets;
  for (size_t i = 0; i < set.images.size(); ++i) {
    const std::string name = records[i].image_id + ".png";
    const fs::path img_path = fs::path(dir) / "images" / name;
    write_png_rgb8(img_path.string(), set.images[i].image);
    write_mask(set.images[i].gt, (fs::path(dir) / "gt" / name).string());
    records[i].path = img_path.string();
    phrase_sets.push_back(set.images[i].phrases);
  }
  write_manifest(records, (fs::path(dir) / "manifest.jsonl").string());
  phrase::write_phrase_sets(phrase_sets, (fs::path(dir) / "phrases.jsonl").string());
  write_captioner_fixtures(set, (fs::path(dir) / "captioner_fixtures.jsonl").string());
}

}  // namespace sod::synth
