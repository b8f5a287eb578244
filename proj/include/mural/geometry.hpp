#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace mural {

/// Axis-aligned rectangle with top-left origin and closed-interval semantics:
/// the box occupies [x, x+w] x [y, y+h]. Shared by object boxes and regions;
/// the coordinate space (original image vs. scaled image) is a property of
/// the context, not the type.
struct BBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double x2() const { return x + w; }
  double y2() const { return y + h; }
  double area() const { return w * h; }

  bool valid() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(w) &&
           std::isfinite(h) && x >= 0.0 && y >= 0.0 && w > 0.0 && h > 0.0;
  }

  bool operator==(const BBox&) const = default;
};

inline double intersection_area(const BBox& a, const BBox& b) {
  const double iw = std::min(a.x2(), b.x2()) - std::max(a.x, b.x);
  const double ih = std::min(a.y2(), b.y2()) - std::max(a.y, b.y);
  return std::max(0.0, iw) * std::max(0.0, ih);
}

/// Intersection over union; 0 for disjoint boxes.
inline double iou(const BBox& a, const BBox& b) {
  const double inter = intersection_area(a, b);
  if (inter <= 0.0) return 0.0;
  return inter / (a.area() + b.area() - inter);
}

/// Fraction of `box` covered by `region`: intersection / area(box).
inline double coverage_fraction(const BBox& box, const BBox& region) {
  return intersection_area(box, region) / box.area();
}

/// True iff box lies entirely inside region. Edge-touching counts.
inline bool contains(const BBox& region, const BBox& box) {
  return box.x >= region.x && box.y >= region.y && box.x2() <= region.x2() &&
         box.y2() <= region.y2();
}

/// Uniformly scales all four fields. Round-trips with 1/factor up to
/// floating-point tolerance.
inline BBox rescale_box(const BBox& box, double factor) {
  if (!(factor > 0.0)) {
    throw std::invalid_argument("rescale_box: factor must be positive");
  }
  return BBox{box.x * factor, box.y * factor, box.w * factor, box.h * factor};
}

/// Intersection rectangle of box and region, expressed in the region's local
/// coordinates (origin at the region's top-left corner). Empty intersections
/// are a normal return variant.
inline std::optional<BBox> clip_box(const BBox& box, const BBox& region) {
  const double x1 = std::max(box.x, region.x);
  const double y1 = std::max(box.y, region.y);
  const double x2 = std::min(box.x2(), region.x2());
  const double y2 = std::min(box.y2(), region.y2());
  if (x2 - x1 <= 0.0 || y2 - y1 <= 0.0) return std::nullopt;
  return BBox{x1 - region.x, y1 - region.y, x2 - x1, y2 - y1};
}

}  // namespace mural
