#include "mural/scoring.hpp"

#include <numeric>
#include <stdexcept>

#include "mural/errors.hpp"

namespace mural {

ClassDistribution class_distribution(std::span<const int64_t> counts,
                                     Smoothing smoothing) {
  if (counts.empty()) {
    throw std::invalid_argument("class_distribution: empty vocabulary");
  }
  const int64_t total = std::accumulate(counts.begin(), counts.end(), int64_t{0});
  ClassDistribution dist;
  dist.smoothing = smoothing;
  dist.source_count = total;
  dist.probs.reserve(counts.size());
  if (smoothing == Smoothing::kLaplace) {
    const double denom =
        static_cast<double>(total) + static_cast<double>(counts.size());
    for (int64_t c : counts) {
      dist.probs.push_back((static_cast<double>(c) + 1.0) / denom);
    }
  } else {
    for (int64_t c : counts) {
      if (c == 0 || total == 0) {
        throw InputError(
            "distribution has zero mass class; re-weighting undefined");
      }
      dist.probs.push_back(static_cast<double>(c) /
                           static_cast<double>(total));
    }
  }
  return dist;
}

ClassDistribution class_distribution_from_state(const DatasetState& state,
                                                const Dataset& dataset,
                                                Smoothing smoothing) {
  const std::vector<int64_t> counts = labeled_class_counts(state, dataset);
  return class_distribution(counts, smoothing);
}

double informative_score(std::span<const Detection> detections) {
  if (detections.empty()) {
    throw std::invalid_argument("informative_score: region has no detections");
  }
  double sum = 0.0;
  for (const Detection& det : detections) sum += 1.0 - det.confidence;
  return sum / static_cast<double>(detections.size());
}

double informative_score(const RegionCandidate& candidate) {
  return informative_score(std::span<const Detection>(candidate.assigned_detections));
}

double reweighted_score(std::span<const Detection> detections,
                        const ClassDistribution& dist) {
  if (detections.empty()) {
    throw std::invalid_argument("reweighted_score: region has no detections");
  }
  double sum = 0.0;
  for (const Detection& det : detections) {
    const double p = dist.probs.at(static_cast<size_t>(det.class_id));
    if (!(p > 0.0)) {
      throw InputError(
          "distribution has zero mass class; re-weighting undefined");
    }
    sum += (1.0 - det.confidence) / p;
  }
  return sum / static_cast<double>(detections.size());
}

double reweighted_score(const RegionCandidate& candidate,
                        const ClassDistribution& dist) {
  return reweighted_score(std::span<const Detection>(candidate.assigned_detections),
                          dist);
}

void score_candidates(std::vector<RegionCandidate>& candidates,
                      const Dataset& dataset, const DatasetState& state,
                      const RunConfig& config, bool reweight) {
  if (!reweight) {
    for (RegionCandidate& c : candidates) c.score = informative_score(c);
    return;
  }
  const ClassDistribution dist =
      class_distribution_from_state(state, dataset, config.smoothing);
  for (RegionCandidate& c : candidates) c.score = reweighted_score(c, dist);
}

}  // namespace mural
