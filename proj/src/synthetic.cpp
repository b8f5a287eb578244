#include "mural/synthetic.hpp"

#include <numeric>
#include <stdexcept>

#include "mural/rng.hpp"

namespace mural {

Dataset make_synthetic_dataset(const SyntheticSpec& spec) {
  if (spec.class_names.empty() ||
      spec.class_names.size() != spec.class_weights.size()) {
    throw std::invalid_argument("synthetic: class names/weights mis-sized");
  }
  for (double w : spec.class_weights) {
    if (!(w > 0.0)) {
      throw std::invalid_argument("synthetic: class weights must be positive");
    }
  }
  if (spec.num_images < 1 || spec.image_width <= 0.0 ||
      spec.image_height <= 0.0) {
    throw std::invalid_argument("synthetic: bad image geometry");
  }
  if (spec.min_objects_per_image < 0 ||
      spec.max_objects_per_image < spec.min_objects_per_image) {
    throw std::invalid_argument("synthetic: bad objects-per-image range");
  }
  if (!(spec.min_object_frac > 0.0) ||
      !(spec.max_object_frac >= spec.min_object_frac) ||
      !(spec.max_object_frac <= 1.0)) {
    throw std::invalid_argument("synthetic: bad object size range");
  }

  std::vector<std::pair<int64_t, std::string>> categories;
  for (size_t i = 0; i < spec.class_names.size(); ++i) {
    categories.emplace_back(static_cast<int64_t>(i), spec.class_names[i]);
  }
  ClassVocabulary vocab(std::move(categories));

  std::vector<double> cumulative(spec.class_weights.size());
  std::partial_sum(spec.class_weights.begin(), spec.class_weights.end(),
                   cumulative.begin());
  const double weight_total = cumulative.back();

  Rng rng(mix_seed(spec.rng_seed, 0x5D47A5E7ull));
  const double short_edge = std::min(spec.image_width, spec.image_height);

  std::vector<ImageRecord> images;
  images.reserve(static_cast<size_t>(spec.num_images));
  int64_t next_object_id = 1;
  for (int i = 0; i < spec.num_images; ++i) {
    ImageRecord image;
    image.image_id = i + 1;
    image.width = spec.image_width;
    image.height = spec.image_height;

    const int span = spec.max_objects_per_image - spec.min_objects_per_image;
    const int n_objects =
        spec.min_objects_per_image +
        (span > 0 ? static_cast<int>(rng.uniform_int(span + 1)) : 0);
    for (int k = 0; k < n_objects; ++k) {
      const double pick = rng.uniform(0.0, weight_total);
      int class_id = 0;
      while (class_id + 1 < static_cast<int>(cumulative.size()) &&
             pick >= cumulative[static_cast<size_t>(class_id)]) {
        ++class_id;
      }
      const double w =
          rng.uniform(spec.min_object_frac, spec.max_object_frac) * short_edge;
      const double h =
          rng.uniform(spec.min_object_frac, spec.max_object_frac) * short_edge;
      const double x = rng.uniform(0.0, spec.image_width - w);
      const double y = rng.uniform(0.0, spec.image_height - h);

      GroundTruthObject obj;
      obj.object_id = next_object_id++;
      obj.image_id = image.image_id;
      obj.class_id = class_id;
      obj.box = BBox{x, y, w, h};
      image.objects.push_back(std::move(obj));
    }
    images.push_back(std::move(image));
  }
  return Dataset(std::move(vocab), std::move(images));
}

}  // namespace mural
