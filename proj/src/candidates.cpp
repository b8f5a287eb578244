#include "mural/candidates.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "mural/errors.hpp"

namespace mural {

namespace {

constexpr double kOffsetEps = 1e-9;

/// Earlier window wins a tie: smaller (y, x), then position in the list.
bool window_before(const BBox& a, int ai, const BBox& b, int bi) {
  if (a.y != b.y) return a.y < b.y;
  if (a.x != b.x) return a.x < b.x;
  return ai < bi;
}

std::vector<double> axis_offsets(double scaled_extent, double window_extent,
                                 double stride) {
  const double max_offset = scaled_extent - window_extent;
  std::vector<double> offsets;
  for (double off = 0.0; off <= max_offset + kOffsetEps; off += stride) {
    offsets.push_back(off);
  }
  if (offsets.empty() || offsets.back() < max_offset - kOffsetEps) {
    offsets.push_back(max_offset);
  }
  return offsets;
}

}  // namespace

double compute_scale_factor(double width, double height,
                            const ScaleSpec& spec) {
  const double short_edge = std::min(width, height);
  const double long_edge = std::max(width, height);
  return std::min(spec.min_side / short_edge, spec.max_side / long_edge);
}

std::vector<BBox> enumerate_windows(double width, double height, double factor,
                                    double stride) {
  if (!(factor > 0.0)) {
    throw std::invalid_argument("enumerate_windows: factor must be positive");
  }
  if (!(stride >= 1.0)) {
    throw std::invalid_argument("enumerate_windows: stride must be >= 1");
  }
  const double scaled_w = width * factor;
  const double scaled_h = height * factor;
  if (scaled_w < width || scaled_h < height) {
    return {BBox{0.0, 0.0, scaled_w, scaled_h}};
  }
  const std::vector<double> ys = axis_offsets(scaled_h, height, stride);
  const std::vector<double> xs = axis_offsets(scaled_w, width, stride);
  std::vector<BBox> windows;
  windows.reserve(ys.size() * xs.size());
  for (double y : ys) {
    for (double x : xs) {
      windows.push_back(BBox{x, y, width, height});
    }
  }
  return windows;
}

std::vector<CoverAssignment> greedy_cover_assignments(
    std::span<const BBox> windows, std::span<const BBox> boxes) {
  // remaining[i] = uncovered box indices fully contained in window i; windows
  // whose set empties drop out of `alive`.
  std::vector<std::vector<int>> remaining(windows.size());
  std::vector<int> alive;
  for (size_t w = 0; w < windows.size(); ++w) {
    for (size_t b = 0; b < boxes.size(); ++b) {
      if (contains(windows[w], boxes[b])) {
        remaining[w].push_back(static_cast<int>(b));
      }
    }
    if (!remaining[w].empty()) alive.push_back(static_cast<int>(w));
  }

  std::vector<CoverAssignment> result;
  std::vector<char> covered(boxes.size(), 0);
  while (!alive.empty()) {
    int best = -1;
    for (int w : alive) {
      if (best < 0 ||
          remaining[w].size() > remaining[best].size() ||
          (remaining[w].size() == remaining[best].size() &&
           window_before(windows[w], w, windows[best], best))) {
        best = w;
      }
    }
    if (remaining[best].empty()) break;  // unreachable; alive is pruned

    for (int b : remaining[best]) covered[b] = 1;
    result.push_back(CoverAssignment{best, std::move(remaining[best])});

    std::vector<int> still_alive;
    for (int w : alive) {
      if (w == best) continue;
      auto& r = remaining[w];
      std::erase_if(r, [&](int b) { return covered[b]; });
      if (!r.empty()) still_alive.push_back(w);
    }
    alive = std::move(still_alive);
  }
  return result;
}

std::vector<RegionCandidate> generate_multiscale_candidates(
    const ImageRecord& image, std::span<const Detection> detections,
    const RunConfig& config) {
  std::vector<RegionCandidate> candidates;
  const double stride = config.resolve_stride(image);
  for (int scale_index = 0; scale_index < config.num_scales(); ++scale_index) {
    const double factor =
        compute_scale_factor(image.width, image.height, config.scales[scale_index]);
    const std::vector<BBox> windows =
        enumerate_windows(image.width, image.height, factor, stride);

    std::vector<BBox> scaled_boxes;
    scaled_boxes.reserve(detections.size());
    for (const Detection& det : detections) {
      scaled_boxes.push_back(rescale_box(det.box, factor));
    }

    for (CoverAssignment& assignment :
         greedy_cover_assignments(windows, scaled_boxes)) {
      RegionCandidate candidate;
      candidate.image_id = image.image_id;
      candidate.scale_index = scale_index;
      candidate.scale_factor = factor;
      candidate.region_scaled = windows[static_cast<size_t>(assignment.window_index)];
      candidate.region_original =
          rescale_box(candidate.region_scaled, 1.0 / factor);
      candidate.assigned_detections.reserve(assignment.detection_indices.size());
      for (int b : assignment.detection_indices) {
        candidate.assigned_detections.push_back(detections[static_cast<size_t>(b)]);
      }
      candidates.push_back(std::move(candidate));
    }
  }
  return candidates;
}

std::vector<RegionCandidate> generate_pool_candidates(
    const Dataset& dataset, const std::vector<Detection>& detections,
    const RunConfig& config, const DatasetState& state) {
  std::unordered_map<int64_t, std::vector<Detection>> by_image;
  for (const Detection& det : detections) {
    if (det.confidence < config.confidence_threshold) continue;
    if (det.matched_gt && state.labeled_objects.contains(*det.matched_gt)) {
      continue;  // already bought; re-covering it buys nothing
    }
    by_image[det.image_id].push_back(det);
  }

  std::vector<RegionCandidate> candidates;
  for (int64_t image_id : state.unlabeled_images) {
    const ImageRecord* image = dataset.find_image(image_id);
    if (image == nullptr) {
      throw InputError("state references unknown image id=" +
                       std::to_string(image_id));
    }
    auto it = by_image.find(image_id);
    if (it == by_image.end() || it->second.empty()) continue;
    std::vector<RegionCandidate> per_image =
        generate_multiscale_candidates(*image, it->second, config);
    for (RegionCandidate& c : per_image) candidates.push_back(std::move(c));
  }
  return candidates;
}

}  // namespace mural
