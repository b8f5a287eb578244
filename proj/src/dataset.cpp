#include "mural/dataset.hpp"

#include <algorithm>
#include <set>
#include <utility>

#include "json_util.hpp"
#include "mural/errors.hpp"

namespace mural {

namespace {

using jsonio::json;

std::string annotation_record(int64_t id) {
  return "annotation id=" + std::to_string(id);
}

}  // namespace

ClassVocabulary::ClassVocabulary(
    std::vector<std::pair<int64_t, std::string>> categories) {
  std::sort(categories.begin(), categories.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  names_.reserve(categories.size());
  source_ids_.reserve(categories.size());
  for (size_t i = 0; i < categories.size(); ++i) {
    if (i > 0 && categories[i].first == categories[i - 1].first) {
      throw InputError("duplicate category id=" +
                       std::to_string(categories[i].first));
    }
    source_ids_.push_back(categories[i].first);
    names_.push_back(std::move(categories[i].second));
    by_source_[categories[i].first] = static_cast<int>(i);
  }
}

std::optional<int> ClassVocabulary::from_source(int64_t source_id) const {
  auto it = by_source_.find(source_id);
  if (it == by_source_.end()) return std::nullopt;
  return it->second;
}

Dataset::Dataset(ClassVocabulary vocab, std::vector<ImageRecord> images)
    : vocab_(std::move(vocab)), images_(std::move(images)) {
  std::sort(images_.begin(), images_.end(),
            [](const ImageRecord& a, const ImageRecord& b) {
              return a.image_id < b.image_id;
            });
  class_totals_.assign(static_cast<size_t>(vocab_.size()), 0);
  for (size_t i = 0; i < images_.size(); ++i) {
    ImageRecord& image = images_[i];
    if (i > 0 && image.image_id == images_[i - 1].image_id) {
      throw InputError("duplicate image id=" + std::to_string(image.image_id));
    }
    image_index_[image.image_id] = i;
    std::sort(image.objects.begin(), image.objects.end(),
              [](const GroundTruthObject& a, const GroundTruthObject& b) {
                return a.object_id < b.object_id;
              });
    for (size_t j = 0; j < image.objects.size(); ++j) {
      const GroundTruthObject& obj = image.objects[j];
      if (!object_index_.emplace(obj.object_id, std::make_pair(i, j)).second) {
        throw InputError("duplicate object id=" +
                         std::to_string(obj.object_id));
      }
      if (obj.class_id < 0 || obj.class_id >= vocab_.size()) {
        throw InputError("object id=" + std::to_string(obj.object_id) +
                         " has out-of-range class");
      }
      ++class_totals_[static_cast<size_t>(obj.class_id)];
      ++total_objects_;
    }
  }
}

const ImageRecord* Dataset::find_image(int64_t image_id) const {
  auto it = image_index_.find(image_id);
  if (it == image_index_.end()) return nullptr;
  return &images_[it->second];
}

const GroundTruthObject* Dataset::find_object(int64_t object_id) const {
  auto it = object_index_.find(object_id);
  if (it == object_index_.end()) return nullptr;
  return &images_[it->second.first].objects[it->second.second];
}

Dataset load_dataset(const std::filesystem::path& path) {
  const json root = jsonio::load_json_file(path);
  if (!root.is_object()) {
    throw InputError("dataset file " + path.string() +
                     " is not a JSON object");
  }

  const json& categories = jsonio::require(root, "categories", "dataset file");
  if (!categories.is_array() || categories.empty()) {
    throw InputError("dataset 'categories' must be a non-empty array");
  }
  std::vector<std::pair<int64_t, std::string>> cats;
  for (const json& c : categories) {
    const std::string record = "category entry";
    cats.emplace_back(jsonio::require_int64(c, "id", record),
                      jsonio::require_string(c, "name", record));
  }
  ClassVocabulary vocab(std::move(cats));

  const json& images_json = jsonio::require(root, "images", "dataset file");
  if (!images_json.is_array()) {
    throw InputError("dataset 'images' must be an array");
  }
  std::vector<ImageRecord> images;
  std::unordered_map<int64_t, size_t> by_id;
  for (const json& im : images_json) {
    ImageRecord rec;
    rec.image_id = jsonio::require_int64(im, "id", "image entry");
    const std::string record = "image id=" + std::to_string(rec.image_id);
    rec.width = jsonio::require_double(im, "width", record);
    rec.height = jsonio::require_double(im, "height", record);
    if (rec.width <= 0 || rec.height <= 0) {
      throw InputError(record + " has non-positive dimensions");
    }
    if (!by_id.emplace(rec.image_id, images.size()).second) {
      throw InputError("duplicate image id=" + std::to_string(rec.image_id));
    }
    images.push_back(std::move(rec));
  }

  const json& annotations =
      jsonio::require(root, "annotations", "dataset file");
  if (!annotations.is_array()) {
    throw InputError("dataset 'annotations' must be an array");
  }
  std::set<int64_t> seen_objects;
  for (const json& a : annotations) {
    GroundTruthObject obj;
    obj.object_id = jsonio::require_int64(a, "id", "annotation entry");
    const std::string record = annotation_record(obj.object_id);
    if (!seen_objects.insert(obj.object_id).second) {
      throw InputError("duplicate object id=" + std::to_string(obj.object_id));
    }
    obj.image_id = jsonio::require_int64(a, "image_id", record);
    auto img_it = by_id.find(obj.image_id);
    if (img_it == by_id.end()) {
      throw InputError(record + " references unknown image id=" +
                       std::to_string(obj.image_id));
    }
    const int64_t source_class = jsonio::require_int64(a, "category_id", record);
    auto class_id = vocab.from_source(source_class);
    if (!class_id) {
      throw InputError(record + " references unknown category id=" +
                       std::to_string(source_class));
    }
    obj.class_id = *class_id;
    obj.box = jsonio::bbox_from_json(jsonio::require(a, "bbox", record), record);
    if (!obj.box.valid()) {
      throw InputError(record + " has a degenerate bbox");
    }
    ImageRecord& image = images[img_it->second];
    auto clipped = clip_box(obj.box, image.bounds());
    if (!clipped) {
      throw InputError(record + " lies entirely outside its image");
    }
    obj.box = *clipped;  // clipped to image bounds; bounds() origin is (0,0)
    image.objects.push_back(std::move(obj));
  }

  return Dataset(std::move(vocab), std::move(images));
}

void write_dataset(const std::filesystem::path& path, const Dataset& dataset) {
  json root = json::object();
  json categories = json::array();
  for (int c = 0; c < dataset.vocab().size(); ++c) {
    categories.push_back({{"id", c}, {"name", dataset.vocab().name(c)}});
  }
  root["categories"] = std::move(categories);

  json images = json::array();
  json annotations = json::array();
  for (const ImageRecord& image : dataset.images()) {
    images.push_back({{"id", image.image_id},
                      {"width", image.width},
                      {"height", image.height}});
    for (const GroundTruthObject& obj : image.objects) {
      json a = json::object();
      a["id"] = obj.object_id;
      a["image_id"] = obj.image_id;
      a["category_id"] = obj.class_id;
      a["bbox"] = jsonio::bbox_to_json(obj.box);
      annotations.push_back(std::move(a));
    }
  }
  root["images"] = std::move(images);
  root["annotations"] = std::move(annotations);
  jsonio::write_json_file(path, root);
}

std::vector<Detection> load_predictions(const std::filesystem::path& path,
                                        const Dataset& dataset) {
  const json root = jsonio::load_json_file(path);
  if (!root.is_array()) {
    throw InputError("predictions file " + path.string() +
                     " is not a JSON array");
  }
  std::vector<Detection> detections;
  detections.reserve(root.size());
  for (size_t i = 0; i < root.size(); ++i) {
    const json& p = root[i];
    const std::string record = "prediction #" + std::to_string(i);
    Detection det;
    det.image_id = jsonio::require_int64(p, "image_id", record);
    if (dataset.find_image(det.image_id) == nullptr) {
      throw InputError(record + " references unknown image id=" +
                       std::to_string(det.image_id));
    }
    const int64_t source_class =
        jsonio::require_int64(p, "category_id", record);
    auto class_id = dataset.vocab().from_source(source_class);
    if (!class_id) {
      throw InputError(record + " references unknown category id=" +
                       std::to_string(source_class));
    }
    det.class_id = *class_id;
    det.box = jsonio::bbox_from_json(jsonio::require(p, "bbox", record), record);
    det.confidence = jsonio::require_double(p, "score", record);
    if (det.confidence < 0.0 || det.confidence > 1.0) {
      throw InputError(record + " has score outside [0, 1]");
    }
    detections.push_back(std::move(det));
  }
  return detections;
}

}  // namespace mural
