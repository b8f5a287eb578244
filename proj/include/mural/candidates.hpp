#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mural/config.hpp"
#include "mural/dataset.hpp"
#include "mural/geometry.hpp"
#include "mural/state.hpp"

namespace mural {

struct RegionCandidate {
  int64_t image_id = 0;
  int scale_index = 0;
  double scale_factor = 1.0;
  BBox region_scaled;    // window in the rescaled image's coordinates
  BBox region_original;  // same window mapped back to original coordinates
  /// Detections assigned to this window (boxes in original-image space,
  /// input order preserved). Never empty for an emitted candidate.
  std::vector<Detection> assigned_detections;
  double score = 0.0;

  bool operator==(const RegionCandidate&) const = default;
};

/// Rescale factor that fits (width, height) to the scale spec:
/// min(min_side / short_edge, max_side / long_edge).
double compute_scale_factor(double width, double height, const ScaleSpec& spec);

/// Sliding windows of the original image's size over the rescaled image.
/// factor < 1: the whole rescaled image as a single window. factor >= 1:
/// offsets 0, stride, 2*stride, ... per axis plus the flush-right/bottom
/// offset, y-major order.
std::vector<BBox> enumerate_windows(double width, double height, double factor,
                                    double stride);

struct CoverAssignment {
  int window_index = 0;  // index into the windows span as given
  std::vector<int> detection_indices;

  bool operator==(const CoverAssignment&) const = default;
};

/// Greedy cover: repeatedly take the window fully containing the most
/// still-uncovered boxes until none contains any. Ties go to the earlier
/// (y, x, index) window. Boxes contained by no window are left uncovered.
std::vector<CoverAssignment> greedy_cover_assignments(
    std::span<const BBox> windows, std::span<const BBox> boxes);

/// All scales for one image. Detections must be pre-filtered (confidence
/// threshold, labeled-object exclusion) and in original-image space.
std::vector<RegionCandidate> generate_multiscale_candidates(
    const ImageRecord& image, std::span<const Detection> detections,
    const RunConfig& config);

/// Candidate sweep over the unlabeled pool: keep detections with
/// confidence >= threshold that are not matched to an already-labeled
/// object, then run every scale on every unlabeled image.
std::vector<RegionCandidate> generate_pool_candidates(
    const Dataset& dataset, const std::vector<Detection>& detections,
    const RunConfig& config, const DatasetState& state);

}  // namespace mural
