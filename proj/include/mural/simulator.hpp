#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mural/config.hpp"
#include "mural/dataset.hpp"
#include "mural/report.hpp"
#include "mural/state.hpp"

namespace mural {

/// Synthetic detector. Confidence on a ground-truth object grows with how
/// much of its class is already labeled:
///   clamp(base + gain * ln(1 + n_labeled(c)) / ln(1 + n_total(c)) + noise)
/// All stochastic draws are keyed per (seed, image, cycle, object), so a
/// rerun with the same seed reproduces every box bit for bit.
struct DetectorModel {
  std::vector<double> base_confidence;  // per dense class id
  std::vector<double> confidence_gain;
  std::vector<double> miss_rate;
  double box_jitter = 0.0;           // fraction of box size
  double false_positive_rate = 0.0;  // expected spurious boxes per image
  double confidence_noise = 0.0;
  uint64_t rng_seed = 0;

  /// Broadcasts the config's scalar detector parameters across all classes.
  static DetectorModel from_config(const RunConfig& config, int num_classes);
  void validate() const;

  bool operator==(const DetectorModel&) const = default;
};

/// Detections for one image at the state's current cycle. Misses, jitter and
/// false positives come from per-object deterministic streams.
std::vector<Detection> simulate_detections(const ImageRecord& image,
                                           const DetectorModel& model,
                                           const DatasetState& state,
                                           const Dataset& dataset);

enum class Strategy {
  kMural,
  kMuralUnweighted,
  kCoarseRandom,
  kCoarseConfidence,
  kFineRandom,
  kFineConfidence,
};

const std::vector<std::string>& strategy_names();
std::string to_string(Strategy strategy);
std::optional<Strategy> strategy_from_string(const std::string& name);

/// Seed pool: a seeded shuffle of the image list, first
/// max(1, round(seed_fraction * N)) images fully labeled.
DatasetState initial_state(const Dataset& dataset, const RunConfig& config);

struct RunResult {
  std::vector<CycleReport> reports;
  bool pool_exhausted = false;
  DatasetState final_state;
  std::vector<AcquisitionRecord> audit;
};

RunResult run_loop(const Dataset& dataset, const RunConfig& config,
                   const DetectorModel& model, Strategy strategy,
                   DatasetState state);
RunResult run_loop(const Dataset& dataset, const RunConfig& config,
                   Strategy strategy);

}  // namespace mural
