#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "mural/config.hpp"
#include "mural/dataset.hpp"
#include "mural/report.hpp"
#include "mural/selection.hpp"
#include "mural/state.hpp"

namespace mural {

struct ObjectGrant {
  int64_t object_id = 0;
  int class_id = 0;
  BBox clipped;  // region-local label box

  bool operator==(const ObjectGrant&) const = default;
};

struct RegionGrant {
  int64_t image_id = 0;
  int scale_index = 0;
  BBox region;  // original-image coordinates
  std::vector<ObjectGrant> objects;

  bool operator==(const RegionGrant&) const = default;
};

/// Ground-truth objects a region's annotation covers: overlap above the
/// configured threshold, not yet labeled, not in `taken`. Boxes come back
/// clipped to the region and shifted to region-local coordinates.
std::vector<ObjectGrant> objects_for_region(const ImageRecord& image,
                                            const BBox& region,
                                            const RunConfig& config,
                                            const DatasetState& state,
                                            const std::set<int64_t>& taken);

/// Apply grants to the state: record labels and regions, advance the cycle,
/// refresh the unlabeled-image pool. Returns the cycle's report (per-scale
/// counts sized num_scales); appends one audit record per granted object
/// when `audit` is non-null.
CycleReport commit_grants(DatasetState& state, const Dataset& dataset,
                          const std::vector<RegionGrant>& grants,
                          int64_t budget_requested, int num_scales,
                          std::vector<AcquisitionRecord>* audit = nullptr);

/// Resolve a selection into grants (in pick order, deduplicating objects
/// across regions) and commit them. The selection must have been made
/// against this state's cycle.
CycleReport acquire(DatasetState& state, const Dataset& dataset,
                    const SelectionResult& selection, const RunConfig& config,
                    std::vector<AcquisitionRecord>* audit = nullptr);

}  // namespace mural
