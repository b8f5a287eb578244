#include "mural/state.hpp"

#include <string>

#include "json_util.hpp"
#include "mural/errors.hpp"

namespace mural {

namespace {

using jsonio::json;

constexpr int kStateVersion = 1;

}  // namespace

void save_state(const DatasetState& state, const std::filesystem::path& path) {
  json root = json::object();
  root["version"] = kStateVersion;
  root["cycle_index"] = state.cycle_index;

  json objects = json::array();
  for (const auto& [object_id, clipped] : state.labeled_objects) {
    objects.push_back({{"object_id", object_id},
                       {"clipped_bbox", jsonio::bbox_to_json(clipped)}});
  }
  root["labeled_objects"] = std::move(objects);

  json regions = json::array();
  for (const LabeledRegion& region : state.labeled_regions) {
    regions.push_back({{"image_id", region.image_id},
                       {"scale", region.scale_index},
                       {"bbox", jsonio::bbox_to_json(region.region)}});
  }
  root["labeled_regions"] = std::move(regions);

  json unlabeled = json::array();
  for (int64_t image_id : state.unlabeled_images) unlabeled.push_back(image_id);
  root["unlabeled_images"] = std::move(unlabeled);

  jsonio::write_json_file(path, root);
}

DatasetState load_state(const std::filesystem::path& path) {
  const json root = jsonio::load_json_file(path);
  if (!root.is_object()) {
    throw InputError("state file " + path.string() + " is not a JSON object");
  }
  const int64_t version = jsonio::require_int64(root, "version", "state file");
  if (version != kStateVersion) {
    throw InputError("state file version " + std::to_string(version) +
                     " unsupported (expected " +
                     std::to_string(kStateVersion) + ")");
  }

  DatasetState state;
  state.cycle_index = static_cast<int>(
      jsonio::require_int64(root, "cycle_index", "state file"));

  const json& objects = jsonio::require(root, "labeled_objects", "state file");
  if (!objects.is_array()) {
    throw InputError("state 'labeled_objects' must be an array");
  }
  for (const json& o : objects) {
    const int64_t object_id =
        jsonio::require_int64(o, "object_id", "labeled object entry");
    const std::string record = "labeled object id=" + std::to_string(object_id);
    BBox clipped =
        jsonio::bbox_from_json(jsonio::require(o, "clipped_bbox", record), record);
    if (!state.labeled_objects.emplace(object_id, clipped).second) {
      throw InputError("duplicate labeled object id=" +
                       std::to_string(object_id));
    }
  }

  const json& regions = jsonio::require(root, "labeled_regions", "state file");
  if (!regions.is_array()) {
    throw InputError("state 'labeled_regions' must be an array");
  }
  for (const json& r : regions) {
    const std::string record = "labeled region entry";
    LabeledRegion region;
    region.image_id = jsonio::require_int64(r, "image_id", record);
    region.scale_index =
        static_cast<int>(jsonio::require_int64(r, "scale", record));
    region.region =
        jsonio::bbox_from_json(jsonio::require(r, "bbox", record), record);
    state.labeled_regions.push_back(region);
  }

  const json& unlabeled =
      jsonio::require(root, "unlabeled_images", "state file");
  if (!unlabeled.is_array()) {
    throw InputError("state 'unlabeled_images' must be an array");
  }
  for (const json& id : unlabeled) {
    if (!id.is_number_integer()) {
      throw InputError("state 'unlabeled_images' has a non-integer entry");
    }
    state.unlabeled_images.insert(id.get<int64_t>());
  }

  return state;
}

std::vector<int64_t> labeled_class_counts(const DatasetState& state,
                                          const Dataset& dataset) {
  std::vector<int64_t> counts(static_cast<size_t>(dataset.vocab().size()), 0);
  for (const auto& [object_id, clipped] : state.labeled_objects) {
    const GroundTruthObject* obj = dataset.find_object(object_id);
    if (obj == nullptr) {
      throw InputError("state references unknown object id=" +
                       std::to_string(object_id));
    }
    ++counts[static_cast<size_t>(obj->class_id)];
  }
  return counts;
}

}  // namespace mural
