#include "mural/config.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "json_util.hpp"
#include "mural/errors.hpp"

namespace mural {

namespace {

using jsonio::json;

void reject_unknown_keys(const json& obj, const std::set<std::string>& known,
                         const std::string& record) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!known.contains(it.key())) {
      throw InputError("unknown key '" + it.key() + "' in " + record);
    }
  }
}

double get_double(const json& obj, const char* key, double fallback,
                  const std::string& record) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) {
    throw InputError("key '" + std::string(key) + "' in " + record +
                     " is not a number");
  }
  return v.get<double>();
}

}  // namespace

double RunConfig::resolve_stride(const ImageRecord& image) const {
  if (stride) return *stride;
  return std::max(1.0, std::min(image.width, image.height) / 4.0);
}

void RunConfig::validate() const {
  if (scales.empty()) throw InputError("config: scales must be non-empty");
  for (const ScaleSpec& s : scales) {
    if (!(s.min_side > 0) || !(s.max_side >= s.min_side)) {
      throw InputError("config: scale spec needs 0 < min_side <= max_side");
    }
  }
  if (budget_per_cycle < 1) throw InputError("config: budget_per_cycle >= 1");
  if (num_cycles < 1) throw InputError("config: num_cycles >= 1");
  if (stride && !(*stride >= 1.0)) throw InputError("config: stride >= 1");
  if (!(confidence_threshold >= 0.0) || !(confidence_threshold < 1.0)) {
    throw InputError("config: confidence_threshold in [0, 1)");
  }
  if (!(overlap_threshold > 0.0) || !(overlap_threshold <= 1.0)) {
    throw InputError("config: overlap_threshold in (0, 1]");
  }
  if (!(seed_fraction >= 0.0) || !(seed_fraction <= 1.0)) {
    throw InputError("config: seed_fraction in [0, 1]");
  }
  if (!(detector.base_confidence >= 0.0) ||
      !(detector.base_confidence <= 1.0)) {
    throw InputError("config: detector.base_confidence in [0, 1]");
  }
  if (!(detector.confidence_gain >= 0.0)) {
    throw InputError("config: detector.confidence_gain >= 0");
  }
  if (!(detector.miss_rate_base >= 0.0) || !(detector.miss_rate_base <= 1.0)) {
    throw InputError("config: detector.miss_rate_base in [0, 1]");
  }
  if (!(detector.box_jitter >= 0.0) || !(detector.box_jitter <= 1.0)) {
    throw InputError("config: detector.box_jitter in [0, 1]");
  }
  if (!(detector.false_positive_rate >= 0.0)) {
    throw InputError("config: detector.false_positive_rate >= 0");
  }
  if (!(detector.confidence_noise >= 0.0)) {
    throw InputError("config: detector.confidence_noise >= 0");
  }
}

RunConfig load_config(const std::filesystem::path& path) {
  const json root = jsonio::load_json_file(path);
  if (!root.is_object()) {
    throw InputError("config file " + path.string() + " is not a JSON object");
  }
  reject_unknown_keys(
      root,
      {"scales", "budget_per_cycle", "num_cycles", "stride",
       "confidence_threshold", "overlap_rule", "overlap_threshold",
       "smoothing", "rng_seed", "seed_fraction", "coarse_aggregation",
       "detector"},
      "config file");

  RunConfig config;
  if (root.contains("scales")) {
    const json& scales = root.at("scales");
    if (!scales.is_array()) {
      throw InputError("config: 'scales' must be an array");
    }
    config.scales.clear();
    for (const json& s : scales) {
      const std::string record = "scale entry";
      reject_unknown_keys(s, {"min_side", "max_side"}, record);
      config.scales.push_back(
          ScaleSpec{jsonio::require_double(s, "min_side", record),
                    jsonio::require_double(s, "max_side", record)});
    }
  }
  if (root.contains("budget_per_cycle")) {
    config.budget_per_cycle =
        jsonio::require_int64(root, "budget_per_cycle", "config file");
  }
  if (root.contains("num_cycles")) {
    config.num_cycles = static_cast<int>(
        jsonio::require_int64(root, "num_cycles", "config file"));
  }
  if (root.contains("stride") && !root.at("stride").is_null()) {
    config.stride = jsonio::require_double(root, "stride", "config file");
  }
  config.confidence_threshold =
      get_double(root, "confidence_threshold", config.confidence_threshold,
                 "config file");
  if (root.contains("overlap_rule")) {
    const std::string rule =
        jsonio::require_string(root, "overlap_rule", "config file");
    if (rule == "coverage") {
      config.overlap_rule = OverlapRule::kCoverage;
    } else if (rule == "iou") {
      config.overlap_rule = OverlapRule::kIou;
    } else {
      throw InputError("config: overlap_rule must be 'coverage' or 'iou'");
    }
  }
  config.overlap_threshold = get_double(
      root, "overlap_threshold", config.overlap_threshold, "config file");
  if (root.contains("smoothing")) {
    const std::string smoothing =
        jsonio::require_string(root, "smoothing", "config file");
    if (smoothing == "laplace") {
      config.smoothing = Smoothing::kLaplace;
    } else if (smoothing == "none") {
      config.smoothing = Smoothing::kNone;
    } else {
      throw InputError("config: smoothing must be 'laplace' or 'none'");
    }
  }
  if (root.contains("rng_seed")) {
    config.rng_seed = static_cast<uint64_t>(
        jsonio::require_int64(root, "rng_seed", "config file"));
  }
  config.seed_fraction =
      get_double(root, "seed_fraction", config.seed_fraction, "config file");
  if (root.contains("coarse_aggregation")) {
    const std::string agg =
        jsonio::require_string(root, "coarse_aggregation", "config file");
    if (agg == "mean") {
      config.coarse_aggregation = CoarseAggregation::kMean;
    } else if (agg == "max") {
      config.coarse_aggregation = CoarseAggregation::kMax;
    } else {
      throw InputError("config: coarse_aggregation must be 'mean' or 'max'");
    }
  }
  if (root.contains("detector")) {
    const json& det = root.at("detector");
    const std::string record = "config 'detector'";
    if (!det.is_object()) throw InputError(record + " must be an object");
    reject_unknown_keys(det,
                        {"base_confidence", "confidence_gain",
                         "miss_rate_base", "box_jitter", "false_positive_rate",
                         "confidence_noise"},
                        record);
    DetectorConfig& d = config.detector;
    d.base_confidence =
        get_double(det, "base_confidence", d.base_confidence, record);
    d.confidence_gain =
        get_double(det, "confidence_gain", d.confidence_gain, record);
    d.miss_rate_base =
        get_double(det, "miss_rate_base", d.miss_rate_base, record);
    d.box_jitter = get_double(det, "box_jitter", d.box_jitter, record);
    d.false_positive_rate =
        get_double(det, "false_positive_rate", d.false_positive_rate, record);
    d.confidence_noise =
        get_double(det, "confidence_noise", d.confidence_noise, record);
  }

  config.validate();
  return config;
}

}  // namespace mural
