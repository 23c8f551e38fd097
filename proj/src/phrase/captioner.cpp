#include "sod/phrase/captioner.hpp"

#include <cmath>
#include <fstream>
#include <unordered_map>

#include "json.hpp"
#include "sod/core/png_io.hpp"
#include "sod/core/rng.hpp"

namespace sod::phrase {

using nlohmann::json;

MockCaptioner MockCaptioner::from_file(const std::string& fixture_path) {
  std::ifstream in(fixture_path);
  if (!in) throw IoError("cannot open captioner fixtures '" + fixture_path + "'");
  std::map<uint64_t, std::vector<std::string>> table;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw IoError("fixture line " + std::to_string(line_no) + ": " + e.what());
    }
    const uint64_t hash = std::stoull(j.at("hash").get<std::string>(), nullptr, 16);
    table[hash] = j.at("phrases").get<std::vector<std::string>>();
  }
  return MockCaptioner(std::move(table));
}

std::vector<std::string> MockCaptioner::caption_texts(const ImageRgb& image) {
  const uint64_t h = content_hash(image);
  auto it = table_.find(h);
  if (it == table_.end()) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(h));
    throw BackendError("mock captioner: no fixture for image hash " +
                       std::string(buf));
  }
  return it->second;
}

PhraseSet caption(CaptionerBackend& backend, const ImageRecord& record,
                  const ImageRgb& image) {
  std::vector<std::string> texts;
  try {
    texts = backend.caption_texts(image);
  } catch (const BackendError&) {
    throw;
  } catch (const std::exception& e) {
    throw BackendError("captioner '" + backend.name() + "' failed on '" +
                       record.image_id + "': " + e.what());
  }
  if (texts.empty())
    throw BackendError("captioner '" + backend.name() + "' returned no phrases for '" +
                       record.image_id + "'");
  PhraseSet ps;
  ps.image_id = record.image_id;
  ps.origin = PhraseOrigin::Generated;
  for (const std::string& t : texts) {
    try {
      ps.phrases.push_back(parse_phrase(t));
    } catch (const ValueError& e) {
      throw BackendError("captioner '" + backend.name() +
                         "' returned unparseable text '" + t + "' for '" +
                         record.image_id + "': " + e.what());
    }
  }
  ps.validate();
  return ps;
}

PhraseSet caption(CaptionerBackend& backend, const ImageRecord& record) {
  return caption(backend, record, read_png_rgb8(record.path));
}

void export_finetune_set(const std::vector<ImageRecord>& manifest,
                         const std::vector<PhraseSet>& phrase_sets,
                         double fraction, uint64_t seed,
                         const std::string& out_path) {
  if (!(fraction > 0.0 && fraction <= 1.0))
    throw ValueError("export_finetune_set: fraction must be in (0, 1]");
  std::unordered_map<std::string, const PhraseSet*> manual;
  for (const PhraseSet& ps : phrase_sets)
    if (ps.origin == PhraseOrigin::Manual) manual[ps.image_id] = &ps;

  const size_t n = manifest.size();
  const size_t k = static_cast<size_t>(
      std::ceil(fraction * static_cast<double>(n)));
  std::vector<size_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(order);
  order.resize(k);
  std::sort(order.begin(), order.end());  // emit in manifest order

  std::ofstream out(out_path);
  if (!out) throw IoError("cannot open '" + out_path + "' for writing");
  out << "# seed=" << seed << "\n";
  for (size_t idx : order) {
    const ImageRecord& rec = manifest[idx];
    auto it = manual.find(rec.image_id);
    if (it == manual.end())
      throw ValueError("export_finetune_set: sampled image '" + rec.image_id +
                       "' has no manual phrase set");
    out << rec.path << '\t' << build_prompt(*it->second) << '\n';
  }
  if (!out) throw IoError("write failed for '" + out_path + "'");
}

}  // namespace sod::phrase
