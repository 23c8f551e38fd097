#pragma once

#include <map>
#include <string>
#include <vector>

#include "sod/nn/tensor.hpp"

namespace sod::nn {

// Checkpoint file: "SODKPT1\n", a JSON header line holding schema_version,
// free-form config entries and the tensor index, then raw little-endian
// float64 payload in index order.
inline constexpr int kCheckpointSchemaVersion = 1;

void save_checkpoint(const std::string& path, const std::vector<Param*>& params,
                     const std::map<std::string, std::string>& config);

// Loads into existing params; every stored tensor must match an existing
// param by name and shape, and vice versa.
std::map<std::string, std::string> load_checkpoint(
    const std::string& path, const std::vector<Param*>& params);

std::map<std::string, std::string> read_checkpoint_config(const std::string& path);

}  // namespace sod::nn
