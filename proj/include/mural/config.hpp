#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "mural/dataset.hpp"

namespace mural {

/// Target resolution (a, b): the short side is resized to min_side unless
/// the long side would exceed max_side.
struct ScaleSpec {
  double min_side = 0.0;
  double max_side = 0.0;
};

/// Rule deciding which ground-truth objects a selected region buys.
/// kCoverage uses intersection / object area; kIou uses literal
/// intersection-over-union between object and region.
enum class OverlapRule { kCoverage, kIou };

enum class Smoothing { kLaplace, kNone };

/// Aggregation of per-instance uncertainty into a whole-image score for the
/// coarse confidence baseline.
enum class CoarseAggregation { kMean, kMax };

/// Synthetic detector skill knobs; scalars here are broadcast to every class
/// when the model is instantiated.
struct DetectorConfig {
  double base_confidence = 0.6;
  double confidence_gain = 0.3;
  double miss_rate_base = 0.1;
  double box_jitter = 0.0;           // fraction of box size
  double false_positive_rate = 0.0;  // Poisson mean per image
  double confidence_noise = 0.0;     // uniform half-width added to confidence
};

struct RunConfig {
  std::vector<ScaleSpec> scales = {
      {2400.0, 3200.0}, {1024.0, 2048.0}, {600.0, 1200.0}};
  int64_t budget_per_cycle = 500;  // object labels per cycle
  int num_cycles = 6;
  std::optional<double> stride;  // pixels; absent -> window short side / 4
  double confidence_threshold = 0.05;
  OverlapRule overlap_rule = OverlapRule::kCoverage;
  double overlap_threshold = 0.7;
  Smoothing smoothing = Smoothing::kLaplace;
  uint64_t rng_seed = 0;
  double seed_fraction = 0.01;  // fraction of images fully labeled up front
  CoarseAggregation coarse_aggregation = CoarseAggregation::kMean;
  DetectorConfig detector;

  int num_scales() const { return static_cast<int>(scales.size()); }

  /// Concrete stride for one image: the configured value, or a quarter of
  /// the sliding window's short side (the window has the image's own size).
  double resolve_stride(const ImageRecord& image) const;

  /// Throws InputError on any invariant violation.
  void validate() const;
};

/// Loads a config file: JSON mirroring RunConfig field names (scales as
/// [{min_side, max_side}], enums as strings, optional nested `detector`
/// object). Unknown keys are rejected. Missing keys keep their defaults.
RunConfig load_config(const std::filesystem::path& path);

}  // namespace mural
