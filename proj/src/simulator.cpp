#include "mural/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "mural/acquisition.hpp"
#include "mural/candidates.hpp"
#include "mural/errors.hpp"
#include "mural/rng.hpp"
#include "mural/scoring.hpp"
#include "mural/selection.hpp"

namespace mural {

namespace {

// Stream salts keep independent draw families (seed pool, false positives,
// baseline tie-breaking) from ever colliding on the same splitmix state.
constexpr uint64_t kSaltSeedPool = 0x5EEDB0B1ull;
constexpr uint64_t kSaltFalsePositive = 0xFA15EB0Cull;
constexpr uint64_t kSaltCoarseRandom = 0xC0A25EADull;
constexpr uint64_t kSaltFineRandom = 0xF19EAD01ull;

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

bool detection_usable(const Detection& det, const RunConfig& config,
                      const DatasetState& state) {
  if (det.confidence < config.confidence_threshold) return false;
  if (det.matched_gt && state.labeled_objects.contains(*det.matched_gt)) {
    return false;  // already bought; re-covering it buys nothing
  }
  return true;
}

struct CycleOutcome {
  std::optional<CycleReport> report;
  bool exhausted = false;
};

/// Dry-run object counter handed to the selector. Shares the running `taken`
/// set across picks so the selector's ledger matches what acquisition will
/// charge, region for region.
std::function<int64_t(const RegionCandidate&)> make_object_counter(
    const Dataset& dataset, const RunConfig& config, const DatasetState& state,
    std::set<int64_t>& taken) {
  return [&dataset, &config, &state, &taken](const RegionCandidate& cand) {
    const ImageRecord* image = dataset.find_image(cand.image_id);
    if (image == nullptr) {
      throw InputError("candidate references unknown image id=" +
                       std::to_string(cand.image_id));
    }
    const std::vector<ObjectGrant> objects =
        objects_for_region(*image, cand.region_original, config, state, taken);
    for (const ObjectGrant& obj : objects) taken.insert(obj.object_id);
    return static_cast<int64_t>(objects.size());
  };
}

CycleOutcome run_mural_cycle(const Dataset& dataset, const RunConfig& config,
                             DatasetState& state,
                             const std::vector<Detection>& detections,
                             bool reweight,
                             std::vector<AcquisitionRecord>& audit) {
  CycleOutcome outcome;
  std::vector<RegionCandidate> candidates =
      generate_pool_candidates(dataset, detections, config, state);
  if (candidates.empty()) {
    outcome.exhausted = true;
    return outcome;
  }
  score_candidates(candidates, dataset, state, config, reweight);
  std::set<int64_t> taken;
  const auto count = make_object_counter(dataset, config, state, taken);
  SelectionResult selection =
      scale_aware_select(std::move(candidates), config.num_scales(),
                         config.budget_per_cycle, state.cycle_index, count);
  outcome.report = acquire(state, dataset, selection, config, &audit);
  outcome.exhausted = selection.pool_exhausted;
  return outcome;
}

CycleOutcome run_coarse_cycle(const Dataset& dataset, const RunConfig& config,
                              DatasetState& state,
                              const std::vector<Detection>& detections,
                              bool random,
                              std::vector<AcquisitionRecord>& audit) {
  CycleOutcome outcome;
  std::unordered_map<int64_t, std::vector<Detection>> by_image;
  for (const Detection& det : detections) {
    if (detection_usable(det, config, state)) by_image[det.image_id].push_back(det);
  }

  std::vector<RegionCandidate> candidates;
  for (int64_t image_id : state.unlabeled_images) {
    const ImageRecord* image = dataset.find_image(image_id);
    if (image == nullptr) {
      throw InputError("state references unknown image id=" +
                       std::to_string(image_id));
    }
    RegionCandidate c;
    c.image_id = image_id;
    c.scale_index = 0;
    c.scale_factor = 1.0;
    c.region_scaled = image->bounds();
    c.region_original = image->bounds();
    auto it = by_image.find(image_id);
    if (it != by_image.end()) c.assigned_detections = std::move(it->second);
    if (random) {
      Rng rng(mix_seed(config.rng_seed, kSaltCoarseRandom,
                       static_cast<uint64_t>(state.cycle_index),
                       static_cast<uint64_t>(image_id)));
      c.score = rng.uniform();
    } else if (c.assigned_detections.empty()) {
      c.score = 0.0;  // nothing detected: nothing to be uncertain about
    } else if (config.coarse_aggregation == CoarseAggregation::kMean) {
      c.score = informative_score(c);
    } else {
      double best = 0.0;
      for (const Detection& det : c.assigned_detections) {
        best = std::max(best, 1.0 - det.confidence);
      }
      c.score = best;
    }
    candidates.push_back(std::move(c));
  }
  if (candidates.empty()) {
    outcome.exhausted = true;
    return outcome;
  }

  std::set<int64_t> taken;
  const auto count = make_object_counter(dataset, config, state, taken);
  SelectionResult selection =
      scale_aware_select(std::move(candidates), /*num_scales=*/1,
                         config.budget_per_cycle, state.cycle_index, count);
  outcome.report = acquire(state, dataset, selection, config, &audit);
  outcome.exhausted = selection.pool_exhausted;
  return outcome;
}

CycleOutcome run_fine_cycle(const Dataset& dataset, const RunConfig& config,
                            DatasetState& state,
                            const std::vector<Detection>& detections,
                            bool random,
                            std::vector<AcquisitionRecord>& audit) {
  CycleOutcome outcome;
  std::vector<const Detection*> pool;
  for (const Detection& det : detections) {
    if (detection_usable(det, config, state)) pool.push_back(&det);
  }
  if (random) {
    Rng rng(mix_seed(config.rng_seed, kSaltFineRandom,
                     static_cast<uint64_t>(state.cycle_index)));
    rng.shuffle(pool);
  } else {
    std::sort(pool.begin(), pool.end(),
              [](const Detection* a, const Detection* b) {
                if (a->confidence != b->confidence) {
                  return a->confidence < b->confidence;  // most uncertain first
                }
                if (a->image_id != b->image_id) return a->image_id < b->image_id;
                if (a->box.y != b->box.y) return a->box.y < b->box.y;
                if (a->box.x != b->box.x) return a->box.x < b->box.x;
                if (a->box.w != b->box.w) return a->box.w < b->box.w;
                if (a->box.h != b->box.h) return a->box.h < b->box.h;
                return a->class_id < b->class_id;
              });
  }

  std::set<int64_t> taken;
  std::vector<RegionGrant> grants;
  int64_t consumed = 0;
  for (const Detection* det : pool) {
    if (consumed >= config.budget_per_cycle) break;
    const ImageRecord* image = dataset.find_image(det->image_id);
    if (image == nullptr) {
      throw InputError("detection references unknown image id=" +
                       std::to_string(det->image_id));
    }
    // Best-covered unlabeled object under the instance's box; iterating in
    // object_id order with a strict improvement test keeps ties on the
    // lowest id.
    const GroundTruthObject* best = nullptr;
    double best_coverage = 0.0;
    for (const GroundTruthObject& obj : image->objects) {
      if (state.labeled_objects.contains(obj.object_id)) continue;
      if (taken.contains(obj.object_id)) continue;
      const double cov = coverage_fraction(obj.box, det->box);
      if (!(cov > config.overlap_threshold)) continue;
      if (best == nullptr || cov > best_coverage) {
        best = &obj;
        best_coverage = cov;
      }
    }
    if (best == nullptr) continue;
    taken.insert(best->object_id);
    RegionGrant grant;
    grant.image_id = det->image_id;
    grant.scale_index = 0;
    grant.region = best->box;
    grant.objects = {ObjectGrant{best->object_id, best->class_id,
                                 BBox{0.0, 0.0, best->box.w, best->box.h}}};
    grants.push_back(std::move(grant));
    ++consumed;
  }
  if (grants.empty()) {
    outcome.exhausted = true;
    return outcome;
  }
  outcome.report = commit_grants(state, dataset, grants,
                                 config.budget_per_cycle, config.num_scales(),
                                 &audit);
  outcome.exhausted = consumed < config.budget_per_cycle;
  return outcome;
}

}  // namespace

DetectorModel DetectorModel::from_config(const RunConfig& config,
                                         int num_classes) {
  if (num_classes < 1) {
    throw std::invalid_argument("DetectorModel: num_classes must be >= 1");
  }
  DetectorModel model;
  const size_t n = static_cast<size_t>(num_classes);
  model.base_confidence.assign(n, config.detector.base_confidence);
  model.confidence_gain.assign(n, config.detector.confidence_gain);
  model.miss_rate.assign(n, config.detector.miss_rate_base);
  model.box_jitter = config.detector.box_jitter;
  model.false_positive_rate = config.detector.false_positive_rate;
  model.confidence_noise = config.detector.confidence_noise;
  model.rng_seed = config.rng_seed;
  return model;
}

void DetectorModel::validate() const {
  if (base_confidence.empty() ||
      base_confidence.size() != confidence_gain.size() ||
      base_confidence.size() != miss_rate.size()) {
    throw std::invalid_argument("DetectorModel: per-class vectors mis-sized");
  }
  for (double v : base_confidence) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument("DetectorModel: base_confidence in [0, 1]");
    }
  }
  for (double v : confidence_gain) {
    if (!(v >= 0.0)) {
      throw std::invalid_argument("DetectorModel: confidence_gain >= 0");
    }
  }
  for (double v : miss_rate) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument("DetectorModel: miss_rate in [0, 1]");
    }
  }
  if (!(box_jitter >= 0.0 && box_jitter <= 1.0)) {
    throw std::invalid_argument("DetectorModel: box_jitter in [0, 1]");
  }
  if (!(false_positive_rate >= 0.0)) {
    throw std::invalid_argument("DetectorModel: false_positive_rate >= 0");
  }
  if (!(confidence_noise >= 0.0)) {
    throw std::invalid_argument("DetectorModel: confidence_noise >= 0");
  }
}

std::vector<Detection> simulate_detections(const ImageRecord& image,
                                           const DetectorModel& model,
                                           const DatasetState& state,
                                           const Dataset& dataset) {
  const std::vector<int64_t> labeled = labeled_class_counts(state, dataset);
  const std::vector<int64_t>& totals = dataset.class_totals();
  if (labeled.size() != model.base_confidence.size()) {
    throw std::invalid_argument("simulate_detections: class count mismatch");
  }

  std::vector<Detection> detections;
  for (const GroundTruthObject& obj : image.objects) {
    Rng rng(mix_seed(model.rng_seed, static_cast<uint64_t>(image.image_id),
                     static_cast<uint64_t>(state.cycle_index),
                     static_cast<uint64_t>(obj.object_id)));
    // Fixed draw order keeps an object's stream identical however the
    // parameters gate the outcome.
    const double miss_u = rng.uniform();
    const double noise_u = rng.uniform();
    const double jx = rng.uniform();
    const double jy = rng.uniform();
    const double jw = rng.uniform();
    const double jh = rng.uniform();

    const size_t c = static_cast<size_t>(obj.class_id);
    if (miss_u < model.miss_rate[c]) continue;

    const double progress =
        std::log1p(static_cast<double>(labeled[c])) /
        std::log1p(static_cast<double>(totals[c]));
    const double noise = (2.0 * noise_u - 1.0) * model.confidence_noise;
    const double confidence = clamp01(model.base_confidence[c] +
                                      model.confidence_gain[c] * progress +
                                      noise);

    const double j = model.box_jitter;
    double w = std::max(obj.box.w * (1.0 + j * (2.0 * jw - 1.0)), 1e-9);
    double h = std::max(obj.box.h * (1.0 + j * (2.0 * jh - 1.0)), 1e-9);
    w = std::min(w, image.width);
    h = std::min(h, image.height);
    double x = obj.box.x + j * obj.box.w * (2.0 * jx - 1.0);
    double y = obj.box.y + j * obj.box.h * (2.0 * jy - 1.0);
    x = std::clamp(x, 0.0, image.width - w);
    y = std::clamp(y, 0.0, image.height - h);

    Detection det;
    det.image_id = image.image_id;
    det.box = BBox{x, y, w, h};
    det.class_id = obj.class_id;
    det.confidence = confidence;
    det.matched_gt = obj.object_id;
    detections.push_back(std::move(det));
  }

  if (model.false_positive_rate > 0.0) {
    Rng rng(mix_seed(model.rng_seed, static_cast<uint64_t>(image.image_id),
                     static_cast<uint64_t>(state.cycle_index),
                     kSaltFalsePositive));
    const int count = rng.poisson(model.false_positive_rate);
    const int num_classes = static_cast<int>(model.base_confidence.size());
    for (int i = 0; i < count; ++i) {
      Detection det;
      det.image_id = image.image_id;
      det.class_id = static_cast<int>(rng.uniform_int(num_classes));
      const double w = rng.uniform(0.05, 0.3) * image.width;
      const double h = rng.uniform(0.05, 0.3) * image.height;
      const double x = rng.uniform(0.0, image.width - w);
      const double y = rng.uniform(0.0, image.height - h);
      det.box = BBox{x, y, w, h};
      det.confidence = rng.uniform(0.05, 0.35);
      det.matched_gt = std::nullopt;
      detections.push_back(std::move(det));
    }
  }
  return detections;
}

const std::vector<std::string>& strategy_names() {
  static const std::vector<std::string> names = {
      "mural",         "mural_unweighted", "coarse_random",
      "coarse_confidence", "fine_random",  "fine_confidence"};
  return names;
}

std::string to_string(Strategy strategy) {
  return strategy_names().at(static_cast<size_t>(strategy));
}

std::optional<Strategy> strategy_from_string(const std::string& name) {
  const auto& names = strategy_names();
  for (size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return static_cast<Strategy>(i);
  }
  return std::nullopt;
}

DatasetState initial_state(const Dataset& dataset, const RunConfig& config) {
  DatasetState state;
  const auto& images = dataset.images();

  size_t seed_count = 0;
  if (config.seed_fraction > 0.0 && !images.empty()) {
    seed_count = static_cast<size_t>(
        std::llround(config.seed_fraction * static_cast<double>(images.size())));
    seed_count = std::clamp<size_t>(seed_count, 1, images.size());
  }

  if (seed_count > 0) {
    std::vector<int64_t> ids;
    ids.reserve(images.size());
    for (const ImageRecord& image : images) ids.push_back(image.image_id);
    Rng rng(mix_seed(config.rng_seed, kSaltSeedPool));
    rng.shuffle(ids);
    for (size_t i = 0; i < seed_count; ++i) {
      const ImageRecord* image = dataset.find_image(ids[i]);
      state.labeled_regions.push_back(
          LabeledRegion{image->image_id, image->bounds(), -1});
      for (const GroundTruthObject& obj : image->objects) {
        state.labeled_objects.emplace(obj.object_id, obj.box);
      }
    }
  }

  for (const ImageRecord& image : images) {
    for (const GroundTruthObject& obj : image.objects) {
      if (!state.labeled_objects.contains(obj.object_id)) {
        state.unlabeled_images.insert(image.image_id);
        break;
      }
    }
  }
  return state;
}

RunResult run_loop(const Dataset& dataset, const RunConfig& config,
                   const DetectorModel& model, Strategy strategy,
                   DatasetState state) {
  config.validate();
  model.validate();
  if (model.base_confidence.size() !=
      static_cast<size_t>(dataset.vocab().size())) {
    throw std::invalid_argument("run_loop: model/vocabulary class mismatch");
  }

  RunResult result;
  for (int cycle = 0; cycle < config.num_cycles; ++cycle) {
    std::vector<Detection> detections;
    for (int64_t image_id : state.unlabeled_images) {
      const ImageRecord* image = dataset.find_image(image_id);
      if (image == nullptr) {
        throw InputError("state references unknown image id=" +
                         std::to_string(image_id));
      }
      std::vector<Detection> dets =
          simulate_detections(*image, model, state, dataset);
      detections.insert(detections.end(),
                        std::make_move_iterator(dets.begin()),
                        std::make_move_iterator(dets.end()));
    }

    CycleOutcome outcome;
    switch (strategy) {
      case Strategy::kMural:
        outcome = run_mural_cycle(dataset, config, state, detections,
                                  /*reweight=*/true, result.audit);
        break;
      case Strategy::kMuralUnweighted:
        outcome = run_mural_cycle(dataset, config, state, detections,
                                  /*reweight=*/false, result.audit);
        break;
      case Strategy::kCoarseRandom:
        outcome = run_coarse_cycle(dataset, config, state, detections,
                                   /*random=*/true, result.audit);
        break;
      case Strategy::kCoarseConfidence:
        outcome = run_coarse_cycle(dataset, config, state, detections,
                                   /*random=*/false, result.audit);
        break;
      case Strategy::kFineRandom:
        outcome = run_fine_cycle(dataset, config, state, detections,
                                 /*random=*/true, result.audit);
        break;
      case Strategy::kFineConfidence:
        outcome = run_fine_cycle(dataset, config, state, detections,
                                 /*random=*/false, result.audit);
        break;
    }

    if (outcome.report) result.reports.push_back(*outcome.report);
    if (outcome.exhausted) {
      result.pool_exhausted = true;
      break;
    }
  }
  result.final_state = std::move(state);
  return result;
}

RunResult run_loop(const Dataset& dataset, const RunConfig& config,
                   Strategy strategy) {
  const DetectorModel model =
      DetectorModel::from_config(config, dataset.vocab().size());
  return run_loop(dataset, config, model, strategy,
                  initial_state(dataset, config));
}

}  // namespace mural
