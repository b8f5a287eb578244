#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <vector>

#include "mural/candidates.hpp"
#include "mural/config.hpp"

namespace mural {

struct SelectionResult {
  std::vector<RegionCandidate> selected;  // pick order
  std::vector<int64_t> object_counts;     // n_o charged per selected region
  int64_t budget_requested = 0;
  int64_t budget_consumed = 0;
  std::vector<int64_t> per_scale_counts;  // regions picked per scale
  std::vector<int> exhausted_scales;      // scales whose queue ran dry
  bool pool_exhausted = false;            // consumed < requested
  int cycle_index = 0;

  bool operator==(const SelectionResult&) const = default;
};

/// Stable ranking used inside each scale's queue: score descending, ties by
/// (image_id, region y, region x) ascending on the original-space region.
void sort_candidates_by_score(std::vector<RegionCandidate>& candidates);

/// Round-robin over scales 0..num_scales-1, popping the best remaining
/// candidate of each scale and charging object_count(candidate) against the
/// budget. Stops the moment the running total reaches the budget (the last
/// region may overshoot), or when every scale is empty.
SelectionResult scale_aware_select(
    std::vector<RegionCandidate> candidates, int num_scales, int64_t budget,
    int cycle_index,
    const std::function<int64_t(const RegionCandidate&)>& object_count);

void write_selection_report(const SelectionResult& result,
                            const std::filesystem::path& path);

}  // namespace mural
