#include "sod/core/manifest.hpp"

#include <fstream>
#include <unordered_set>

#include "json.hpp"

namespace sod {

using nlohmann::json;

std::string to_string(SourcePool p) {
  switch (p) {
    case SourcePool::DutsTr: return "DUTS-TR";
    case SourcePool::Coco: return "COCO";
    case SourcePool::OpenImages: return "OpenImages";
    case SourcePool::Voc2012: return "VOC2012";
    case SourcePool::Synthetic: return "synthetic";
  }
  throw ValueError("bad SourcePool");
}

std::string to_string(Split s) {
  return s == Split::Train ? "train" : "test";
}

SourcePool source_pool_from_string(const std::string& s) {
  if (s == "DUTS-TR") return SourcePool::DutsTr;
  if (s == "COCO") return SourcePool::Coco;
  if (s == "OpenImages") return SourcePool::OpenImages;
  if (s == "VOC2012") return SourcePool::Voc2012;
  if (s == "synthetic") return SourcePool::Synthetic;
  throw ValueError("unknown source_pool '" + s + "'");
}

Split split_from_string(const std::string& s) {
  if (s == "train") return Split::Train;
  if (s == "test") return Split::Test;
  throw ValueError("unknown split '" + s + "'");
}

ImageRecord record_from_json_line(const std::string& line, int line_no) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw IoError("manifest line " + std::to_string(line_no) +
                  ": JSON parse error: " + e.what());
  }
  try {
    ImageRecord rec;
    rec.image_id = j.at("image_id").get<std::string>();
    rec.path = j.at("path").get<std::string>();
    rec.width = j.at("width").get<int>();
    rec.height = j.at("height").get<int>();
    rec.source_pool = source_pool_from_string(j.at("source_pool").get<std::string>());
    rec.split = split_from_string(j.at("split").get<std::string>());
    if (j.contains("categories")) {
      for (const auto& c : j.at("categories"))
        rec.categories.emplace_back(c.at("parent").get<std::string>(),
                                    c.at("sub").get<std::string>());
    }
    rec.validate();
    return rec;
  } catch (const json::exception& e) {
    throw IoError("manifest line " + std::to_string(line_no) +
                  ": bad record: " + e.what());
  } catch (const ValueError& e) {
    throw IoError("manifest line " + std::to_string(line_no) + ": " + e.what());
  }
}

std::string record_to_json_line(const ImageRecord& rec) {
  json cats = json::array();
  for (const auto& [parent, sub] : rec.categories)
    cats.push_back({{"parent", parent}, {"sub", sub}});
  json j = {{"image_id", rec.image_id},
            {"path", rec.path},
            {"width", rec.width},
            {"height", rec.height},
            {"source_pool", to_string(rec.source_pool)},
            {"split", to_string(rec.split)},
            {"categories", cats}};
  return j.dump();
}

std::vector<ImageRecord> read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest '" + path + "'");
  std::vector<ImageRecord> records;
  std::unordered_set<std::string> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      // Tolerate a trailing newline only.
      if (in.peek() == std::ifstream::traits_type::eof()) break;
      throw IoError("manifest line " + std::to_string(line_no) + ": empty line");
    }
    ImageRecord rec = record_from_json_line(line, line_no);
    if (!seen.insert(rec.image_id).second)
      throw IoError("manifest '" + path + "': duplicate image_id '" +
                    rec.image_id + "' at line " + std::to_string(line_no));
    records.push_back(std::move(rec));
  }
  return records;
}

void write_manifest(const std::vector<ImageRecord>& records,
                    const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  for (const auto& rec : records) out << record_to_json_line(rec) << '\n';
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace sod
