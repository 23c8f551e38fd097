#pragma once

#include <array>
#include <string>
#include <vector>

#include "sod/core/image.hpp"
#include "sod/core/types.hpp"
#include "sod/phrase/phrase.hpp"

namespace sod::synth {

// Flat-color test world: named colors (the adjectives) and simple shapes
// (the nouns) on a fixed dark background. The mock backends key on these
// exact colors.
struct PaletteColor {
  std::string name;
  std::array<uint8_t, 3> rgb;
};

const std::vector<PaletteColor>& palette();
inline constexpr std::array<uint8_t, 3> kBackground{40, 44, 48};

enum class ShapeKind { Disc, Square, Triangle };
std::string to_string(ShapeKind k);

struct Shape {
  ShapeKind kind = ShapeKind::Disc;
  int color = 0;  // palette index
  int cy = 0, cx = 0;
  int half = 0;  // radius / half-side / half-height
};

struct SynthImage {
  ImageRgb image;
  BinaryGrid gt;                 // union of all salient shapes
  std::vector<Shape> shapes;     // salient shapes only
  phrase::PhraseSet phrases;     // manual annotation, one phrase per shape
};

void draw_shape(ImageRgb& img, const Shape& s);
void rasterize_shape(BinaryGrid& mask, const Shape& s);

// Deterministic image with 1..max_shapes non-overlapping shapes of distinct
// (color, kind) pairs.
SynthImage make_image(const std::string& image_id, int hw, uint64_t seed,
                      int max_shapes = 2);

// Two same-noun discs; only the red one is annotated (and salient). The
// adjective is what disambiguates them.
SynthImage make_disambiguation_image(const std::string& image_id, int hw);

struct SynthSet {
  std::vector<ImageRecord> records;
  std::vector<SynthImage> images;
};

SynthSet make_set(int n, int hw, uint64_t seed, int max_shapes = 2);

// Writes images/, gt/, manifest.jsonl, phrases.jsonl and
// captioner_fixtures.jsonl under dir. Record paths point at images/.
void write_set(const SynthSet& set, const std::string& dir);

// Captioner fixture rows for a set of generated images.
void write_captioner_fixtures(const SynthSet& set, const std::string& path);

}  // namespace sod::synth
