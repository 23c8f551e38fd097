#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "sod/core/image.hpp"
#include "sod/core/types.hpp"
#include "sod/phrase/phrase.hpp"

namespace sod::phrase {

// The captioner role: image -> raw phrase texts. Adapters for real models
// plug in behind this; the mock below is the mandatory deterministic backend.
class CaptionerBackend {
 public:
  virtual ~CaptionerBackend() = default;
  virtual std::string name() const = 0;
  virtual bool reentrant() const { return true; }
  virtual std::vector<std::string> caption_texts(const ImageRgb& image) = 0;
};

// Pure function of (image content hash, fixture table). The table is written
// by the synthetic generator: JSON Lines {hash: "<hex>", phrases: [...]}.
class MockCaptioner : public CaptionerBackend {
 public:
  explicit MockCaptioner(std::map<uint64_t, std::vector<std::string>> table)
      : table_(std::move(table)) {}
  static MockCaptioner from_file(const std::string& fixture_path);

  std::string name() const override { return "mock"; }
  std::vector<std::string> caption_texts(const ImageRgb& image) override;

 private:
  std::map<uint64_t, std::vector<std::string>> table_;
};

// Parses the backend's raw texts into a generated PhraseSet; unparseable or
// empty backend output surfaces as BackendError.
PhraseSet caption(CaptionerBackend& backend, const ImageRecord& record,
                  const ImageRgb& image);
PhraseSet caption(CaptionerBackend& backend, const ImageRecord& record);

// Writes "path<TAB>prompt" lines for ceil(fraction * N) seeded-sampled images
// under a "# seed=<n>" header. Every sampled image needs a manual phrase set.
void export_finetune_set(const std::vector<ImageRecord>& manifest,
                         const std::vector<PhraseSet>& phrase_sets,
                         double fraction, uint64_t seed,
                         const std::string& out_path);

}  // namespace sod::phrase
