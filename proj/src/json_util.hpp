#pragma once

// Internal JSON plumbing shared by the serialization code. ordered_json
// keeps object keys in insertion order so outputs are byte-stable.

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "mural/geometry.hpp"

namespace mural::jsonio {

using json = nlohmann::ordered_json;

json load_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& value);

/// Fetches `key` or throws InputError naming the record it was missing from.
const json& require(const json& obj, const char* key,
                    const std::string& record);

double require_double(const json& obj, const char* key,
                      const std::string& record);
int64_t require_int64(const json& obj, const char* key,
                      const std::string& record);
std::string require_string(const json& obj, const char* key,
                           const std::string& record);

/// [x, y, w, h] array form used everywhere a box appears in a file.
json bbox_to_json(const BBox& box);
BBox bbox_from_json(const json& value, const std::string& record);

}  // namespace mural::jsonio
