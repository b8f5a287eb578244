#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <vector>

#include "mural/dataset.hpp"
#include "mural/geometry.hpp"

namespace mural {

struct LabeledRegion {
  int64_t image_id = 0;
  BBox region;          // original-image space
  int scale_index = 0;  // -1 for whole-image entries (seed pool)

  bool operator==(const LabeledRegion&) const = default;
};

/// Labeled/unlabeled pool state. Single-writer contract: only the
/// acquisition step mutates it, between selection phases.
struct DatasetState {
  /// object_id -> label box in the coordinates of the region that bought it
  /// (origin at the region's top-left corner).
  std::map<int64_t, BBox> labeled_objects;
  std::vector<LabeledRegion> labeled_regions;
  /// Images that still contain at least one unlabeled object.
  std::set<int64_t> unlabeled_images;
  int cycle_index = 0;

  bool operator==(const DatasetState&) const = default;
};

void save_state(const DatasetState& state, const std::filesystem::path& path);
DatasetState load_state(const std::filesystem::path& path);

/// Per-class counts of the labeled objects, indexed by dense class id.
std::vector<int64_t> labeled_class_counts(const DatasetState& state,
                                          const Dataset& dataset);

}  // namespace mural
