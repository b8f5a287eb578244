#include "mural/selection.hpp"

#include <algorithm>
#include <stdexcept>

#include "json_util.hpp"

namespace mural {

void sort_candidates_by_score(std::vector<RegionCandidate>& candidates) {
  std::sort(candidates.begin(), candidates.end(),
            [](const RegionCandidate& a, const RegionCandidate& b) {
              if (a.score != b.score) return a.score > b.score;
              if (a.image_id != b.image_id) return a.image_id < b.image_id;
              if (a.region_original.y != b.region_original.y) {
                return a.region_original.y < b.region_original.y;
              }
              return a.region_original.x < b.region_original.x;
            });
}

SelectionResult scale_aware_select(
    std::vector<RegionCandidate> candidates, int num_scales, int64_t budget,
    int cycle_index,
    const std::function<int64_t(const RegionCandidate&)>& object_count) {
  if (num_scales < 1) {
    throw std::invalid_argument("scale_aware_select: num_scales must be >= 1");
  }
  if (budget < 1) {
    throw std::invalid_argument("scale_aware_select: budget must be >= 1");
  }

  std::vector<std::vector<RegionCandidate>> queues(
      static_cast<size_t>(num_scales));
  for (RegionCandidate& c : candidates) {
    if (c.scale_index < 0 || c.scale_index >= num_scales) {
      throw std::invalid_argument(
          "scale_aware_select: candidate scale out of range");
    }
    queues[static_cast<size_t>(c.scale_index)].push_back(std::move(c));
  }
  for (auto& queue : queues) sort_candidates_by_score(queue);

  SelectionResult result;
  result.budget_requested = budget;
  result.cycle_index = cycle_index;
  result.per_scale_counts.assign(static_cast<size_t>(num_scales), 0);
  std::vector<size_t> next(static_cast<size_t>(num_scales), 0);

  bool done = false;
  while (!done) {
    bool progressed = false;
    for (size_t s = 0; s < queues.size() && !done; ++s) {
      if (next[s] >= queues[s].size()) continue;  // empty scales are skipped
      RegionCandidate picked = std::move(queues[s][next[s]++]);
      const int64_t n = object_count(picked);
      result.selected.push_back(std::move(picked));
      result.object_counts.push_back(n);
      ++result.per_scale_counts[s];
      result.budget_consumed += n;
      progressed = true;
      if (result.budget_consumed >= budget) done = true;
    }
    if (!progressed) break;
  }

  for (size_t s = 0; s < queues.size(); ++s) {
    if (next[s] >= queues[s].size()) {
      result.exhausted_scales.push_back(static_cast<int>(s));
    }
  }
  result.pool_exhausted = result.budget_consumed < budget;
  return result;
}

void write_selection_report(const SelectionResult& result,
                            const std::filesystem::path& path) {
  using jsonio::json;
  json root = json::object();
  root["cycle"] = result.cycle_index;
  root["status"] = result.pool_exhausted ? "pool_exhausted" : "ok";
  root["budget_requested"] = result.budget_requested;
  root["budget_consumed"] = result.budget_consumed;
  root["per_scale_counts"] = result.per_scale_counts;
  json regions = json::array();
  for (size_t i = 0; i < result.selected.size(); ++i) {
    const RegionCandidate& c = result.selected[i];
    json r = json::object();
    r["image_id"] = c.image_id;
    r["scale"] = c.scale_index;
    r["bbox"] = jsonio::bbox_to_json(c.region_original);
    r["score"] = c.score;
    r["n_o"] = result.object_counts[i];
    regions.push_back(std::move(r));
  }
  root["regions"] = std::move(regions);
  jsonio::write_json_file(path, root);
}

}  // namespace mural
