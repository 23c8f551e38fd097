#include "sod/nn/checkpoint.hpp"

#include <fstream>

#include "json.hpp"
#include "sod/core/error.hpp"

namespace sod::nn {

using nlohmann::json;

namespace {
constexpr char kMagic[] = "SODKPT1";

json header_of(const std::string& path, std::ifstream& in) {
  std::string magic;
  if (!std::getline(in, magic) || magic != kMagic)
    throw IoError("'" + path + "' is not a checkpoint file");
  std::string header_line;
  if (!std::getline(in, header_line))
    throw IoError("'" + path + "': missing checkpoint header");
  json header;
  try {
    header = json::parse(header_line);
  } catch (const json::exception& e) {
    throw IoError("'" + path + "': bad checkpoint header: " + e.what());
  }
  if (!header.contains("schema_version") ||
      header.at("schema_version").get<int>() != kCheckpointSchemaVersion)
    throw IoError("'" + path + "': incompatible checkpoint schema version");
  return header;
}
}  // namespace

void save_checkpoint(const std::string& path, const std::vector<Param*>& params,
                     const std::map<std::string, std::string>& config) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  json tensors = json::array();
  for (const Param* p : params)
    tensors.push_back({{"name", p->name}, {"shape", p->value.shape()}});
  json header = {{"schema_version", kCheckpointSchemaVersion},
                 {"config", config},
                 {"tensors", tensors}};
  out << kMagic << '\n' << header.dump() << '\n';
  for (const Param* p : params)
    out.write(reinterpret_cast<const char*>(p->value.data()),
              static_cast<std::streamsize>(p->value.numel() * sizeof(double)));
  if (!out) throw IoError("write failed for '" + path + "'");
}

std::map<std::string, std::string> load_checkpoint(
    const std::string& path, const std::vector<Param*>& params) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint '" + path + "'");
  json header = header_of(path, in);

  std::map<std::string, Param*> by_name;
  for (Param* p : params) by_name[p->name] = p;

  const auto& tensors = header.at("tensors");
  if (tensors.size() != params.size())
    throw IoError("'" + path + "': checkpoint holds " +
                  std::to_string(tensors.size()) + " tensors, model expects " +
                  std::to_string(params.size()));
  for (const auto& t : tensors) {
    const std::string name = t.at("name").get<std::string>();
    const std::vector<int> shape = t.at("shape").get<std::vector<int>>();
    auto it = by_name.find(name);
    if (it == by_name.end())
      throw IoError("'" + path + "': unexpected tensor '" + name + "'");
    Param* p = it->second;
    if (p->value.shape() != shape)
      throw IoError("'" + path + "': shape mismatch for '" + name + "'");
    in.read(reinterpret_cast<char*>(p->value.data()),
            static_cast<std::streamsize>(p->value.numel() * sizeof(double)));
    if (!in) throw IoError("'" + path + "': truncated payload at '" + name + "'");
  }
  return header.at("config").get<std::map<std::string, std::string>>();
}

std::map<std::string, std::string> read_checkpoint_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint '" + path + "'");
  json header = header_of(path, in);
  return header.at("config").get<std::map<std::string, std::string>>();
}

}  // namespace sod::nn
