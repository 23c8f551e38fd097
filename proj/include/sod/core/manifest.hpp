#pragma once

#include <string>
#include <vector>

#include "sod/core/types.hpp"

namespace sod {

// JSON Lines, one ImageRecord per line. Order is preserved; duplicate
// image_ids are rejected.
std::vector<ImageRecord> read_manifest(const std::string& path);
void write_manifest(const std::vector<ImageRecord>& records,
                    const std::string& path);

ImageRecord record_from_json_line(const std::string& line, int line_no);
std::string record_to_json_line(const ImageRecord& rec);

}  // namespace sod
