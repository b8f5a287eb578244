#pragma once

#include <cstdint>
#include <vector>

#include "mural/geometry.hpp"

namespace mural {

/// What one acquisition round bought.
struct CycleReport {
  int cycle_index = 0;
  int64_t budget_requested = 0;
  int64_t budget_consumed = 0;  // unique new labels
  int64_t regions_selected = 0;
  std::vector<int64_t> annotated_per_class;  // dense class id -> new labels
  std::vector<int64_t> annotated_per_scale;  // scale index -> new labels
  double selected_class_entropy = 0.0;  // entropy of this batch, nats
  double kl_to_uniform = 0.0;

  bool operator==(const CycleReport&) const = default;
};

/// One granted label, for audit: which region bought which object when.
struct AcquisitionRecord {
  int cycle_index = 0;
  int64_t object_id = 0;
  int64_t image_id = 0;
  int scale_index = 0;
  BBox region;   // original-image coordinates
  BBox clipped;  // label box, region-local coordinates

  bool operator==(const AcquisitionRecord&) const = default;
};

}  // namespace mural
