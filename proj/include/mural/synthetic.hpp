#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mural/dataset.hpp"

namespace mural {

/// Recipe for a generated dataset: class names with relative frequencies,
/// image geometry, object size range as a fraction of the short image edge.
struct SyntheticSpec {
  std::vector<std::string> class_names;
  std::vector<double> class_weights;  // same length, need not sum to 1
  int num_images = 100;
  double image_width = 1024.0;
  double image_height = 512.0;
  int min_objects_per_image = 1;
  int max_objects_per_image = 8;
  double min_object_frac = 0.05;  // of min(width, height)
  double max_object_frac = 0.4;
  uint64_t rng_seed = 0;
};

/// Deterministic for a given spec. Object boxes always lie fully inside
/// their image.
Dataset make_synthetic_dataset(const SyntheticSpec& spec);

}  // namespace mural
