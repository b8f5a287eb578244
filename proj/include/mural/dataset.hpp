#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "mural/geometry.hpp"

namespace mural {

/// Ordered category list. Class ids are dense 0..N-1; dataset files may use
/// arbitrary unique category ids (COCO files are 1-based with gaps), which
/// are remapped at load time in ascending order of the source id.
class ClassVocabulary {
 public:
  ClassVocabulary() = default;

  /// `categories` is (source_id, name) pairs; sorted by source id internally.
  explicit ClassVocabulary(std::vector<std::pair<int64_t, std::string>> categories);

  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(int class_id) const { return names_.at(static_cast<size_t>(class_id)); }
  int64_t source_id(int class_id) const { return source_ids_.at(static_cast<size_t>(class_id)); }
  std::optional<int> from_source(int64_t source_id) const;

 private:
  std::vector<std::string> names_;
  std::vector<int64_t> source_ids_;
  std::unordered_map<int64_t, int> by_source_;
};

struct GroundTruthObject {
  int64_t object_id = 0;
  int64_t image_id = 0;
  BBox box;  // original-image space, clipped to image bounds at load
  int class_id = 0;
};

struct ImageRecord {
  int64_t image_id = 0;
  double width = 0.0;
  double height = 0.0;
  std::vector<GroundTruthObject> objects;  // sorted by object_id

  BBox bounds() const { return BBox{0.0, 0.0, width, height}; }
};

/// One predicted object: box, class, and confidence. `matched_gt` is
/// simulator plumbing recording which ground-truth object the prediction
/// corresponds to; absent for false positives and for predictions loaded
/// from files.
struct Detection {
  int64_t image_id = 0;
  BBox box;  // original-image space
  int class_id = 0;
  double confidence = 0.0;
  std::optional<int64_t> matched_gt;

  bool operator==(const Detection&) const = default;
};

/// Immutable ground-truth pool: vocabulary plus image records, with id
/// indexes and per-class totals built once at construction.
class Dataset {
 public:
  Dataset() = default;
  Dataset(ClassVocabulary vocab, std::vector<ImageRecord> images);

  const ClassVocabulary& vocab() const { return vocab_; }
  const std::vector<ImageRecord>& images() const { return images_; }
  const ImageRecord* find_image(int64_t image_id) const;
  const GroundTruthObject* find_object(int64_t object_id) const;
  const std::vector<int64_t>& class_totals() const { return class_totals_; }
  int64_t total_objects() const { return total_objects_; }

 private:
  ClassVocabulary vocab_;
  std::vector<ImageRecord> images_;
  std::unordered_map<int64_t, size_t> image_index_;
  std::unordered_map<int64_t, std::pair<size_t, size_t>> object_index_;  // id -> (image idx, object idx)
  std::vector<int64_t> class_totals_;
  int64_t total_objects_ = 0;
};

/// Loads a dataset file: JSON with top-level `categories` [{id, name}],
/// `images` [{id, width, height}], `annotations` [{id, image_id,
/// category_id, bbox:[x,y,w,h]}]. Unknown keys are ignored so converted
/// COCO files load as-is. Boxes extending past image bounds are clipped;
/// schema violations raise InputError naming the offending record.
Dataset load_dataset(const std::filesystem::path& path);

/// Writes the dataset back out in the same schema (category ids are the
/// dense class ids). Used by tests and fixture tooling.
void write_dataset(const std::filesystem::path& path, const Dataset& dataset);

/// Loads a predictions file: JSON list of {image_id, category_id,
/// bbox:[x,y,w,h], score}. Category ids are in the dataset file's id space.
std::vector<Detection> load_predictions(const std::filesystem::path& path,
                                        const Dataset& dataset);

}  // namespace mural
