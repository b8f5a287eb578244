#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mural/candidates.hpp"
#include "mural/config.hpp"
#include "mural/dataset.hpp"
#include "mural/state.hpp"

namespace mural {

/// Per-class probability over the dense vocabulary.
struct ClassDistribution {
  std::vector<double> probs;  // sums to 1 within 1e-9
  Smoothing smoothing = Smoothing::kLaplace;
  int64_t source_count = 0;  // labeled objects the counts came from

  double operator[](int class_id) const { return probs.at(class_id); }
  bool operator==(const ClassDistribution&) const = default;
};

/// Laplace: (count + 1) / (total + K). None: count / total; a zero-count
/// class (or an empty pool) then makes re-weighting undefined, which is
/// reported as an input error.
ClassDistribution class_distribution(std::span<const int64_t> counts,
                                     Smoothing smoothing);

ClassDistribution class_distribution_from_state(const DatasetState& state,
                                                const Dataset& dataset,
                                                Smoothing smoothing);

/// Mean uncertainty: average of (1 - confidence). Throws on an empty list.
double informative_score(std::span<const Detection> detections);
double informative_score(const RegionCandidate& candidate);

/// Same mean with each term scaled by 1 / p(predicted class).
double reweighted_score(std::span<const Detection> detections,
                        const ClassDistribution& dist);
double reweighted_score(const RegionCandidate& candidate,
                        const ClassDistribution& dist);

/// Fill every candidate's score in place from its own detections.
/// reweight=false gives the plain uncertainty mean (ablation arm).
void score_candidates(std::vector<RegionCandidate>& candidates,
                      const Dataset& dataset, const DatasetState& state,
                      const RunConfig& config, bool reweight = true);

}  // namespace mural
