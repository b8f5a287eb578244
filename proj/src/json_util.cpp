#include "json_util.hpp"

#include <fstream>

#include "mural/errors.hpp"

namespace mural::jsonio {

json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw InputError("cannot open file: " + path.string());
  }
  json value = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (value.is_discarded()) {
    throw InputError("malformed JSON in " + path.string());
  }
  return value;
}

void write_json_file(const std::filesystem::path& path, const json& value) {
  std::ofstream out(path);
  if (!out) {
    throw InputError("cannot write file: " + path.string());
  }
  out << value.dump(2) << '\n';
  if (!out) {
    throw InputError("write failed: " + path.string());
  }
}

const json& require(const json& obj, const char* key,
                    const std::string& record) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw InputError("missing key '" + std::string(key) + "' in " + record);
  }
  return obj.at(key);
}

double require_double(const json& obj, const char* key,
                      const std::string& record) {
  const json& v = require(obj, key, record);
  if (!v.is_number()) {
    throw InputError("key '" + std::string(key) + "' in " + record +
                     " is not a number");
  }
  return v.get<double>();
}

int64_t require_int64(const json& obj, const char* key,
                      const std::string& record) {
  const json& v = require(obj, key, record);
  if (!v.is_number_integer()) {
    throw InputError("key '" + std::string(key) + "' in " + record +
                     " is not an integer");
  }
  return v.get<int64_t>();
}

std::string require_string(const json& obj, const char* key,
                           const std::string& record) {
  const json& v = require(obj, key, record);
  if (!v.is_string()) {
    throw InputError("key '" + std::string(key) + "' in " + record +
                     " is not a string");
  }
  return v.get<std::string>();
}

json bbox_to_json(const BBox& box) {
  return json::array({box.x, box.y, box.w, box.h});
}

BBox bbox_from_json(const json& value, const std::string& record) {
  if (!value.is_array() || value.size() != 4) {
    throw InputError("bbox in " + record + " is not a [x, y, w, h] array");
  }
  for (const auto& e : value) {
    if (!e.is_number()) {
      throw InputError("bbox in " + record + " has a non-numeric entry");
    }
  }
  return BBox{value[0].get<double>(), value[1].get<double>(),
              value[2].get<double>(), value[3].get<double>()};
}

}  // namespace mural::jsonio
