// Command-line front end: candidate dumps, budgeted selection on a dump,
// and full simulated annotation runs. Exit codes: 0 ok, 1 internal error,
// 2 usage or input error.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "json_util.hpp"
#include "mural/acquisition.hpp"
#include "mural/candidates.hpp"
#include "mural/config.hpp"
#include "mural/dataset.hpp"
#include "mural/errors.hpp"
#include "mural/metrics.hpp"
#include "mural/scoring.hpp"
#include "mural/selection.hpp"
#include "mural/simulator.hpp"
#include "mural/state.hpp"

namespace {

using mural::jsonio::json;

struct CandidatesArgs {
  std::string dataset;
  std::string predictions;
  std::string config;
  std::string out;
};

struct SelectArgs {
  std::string candidates;
  std::string state;
  int64_t budget = 0;
  std::string out;
};

struct SimulateArgs {
  std::string dataset;
  std::string config;
  std::string strategy;
  std::optional<int64_t> seed;
  std::string out_dir;
};

mural::RunConfig load_config_or_default(const std::string& path) {
  if (path.empty()) {
    mural::RunConfig config;
    config.validate();
    return config;
  }
  return mural::load_config(path);
}

json detection_to_json(const mural::Detection& det,
                       const mural::Dataset& dataset) {
  json d = json::object();
  d["image_id"] = det.image_id;
  d["category_id"] = dataset.vocab().source_id(det.class_id);
  d["bbox"] = mural::jsonio::bbox_to_json(det.box);
  d["score"] = det.confidence;
  return d;
}

int run_candidates(const CandidatesArgs& args) {
  const mural::Dataset dataset = mural::load_dataset(args.dataset);
  const mural::RunConfig config = load_config_or_default(args.config);
  const std::vector<mural::Detection> predictions =
      mural::load_predictions(args.predictions, dataset);

  // A dump scores against a blank labeling state: every image is fair game
  // and the smoothed class distribution is uniform.
  mural::DatasetState state;
  for (const mural::ImageRecord& image : dataset.images()) {
    state.unlabeled_images.insert(image.image_id);
  }

  std::vector<mural::RegionCandidate> candidates =
      mural::generate_pool_candidates(dataset, predictions, config, state);
  mural::score_candidates(candidates, dataset, state, config);

  json root = json::object();
  root["cycle"] = state.cycle_index;
  root["num_scales"] = config.num_scales();
  json list = json::array();
  for (const mural::RegionCandidate& c : candidates) {
    json entry = json::object();
    entry["image_id"] = c.image_id;
    entry["scale"] = c.scale_index;
    entry["scale_factor"] = c.scale_factor;
    entry["bbox_scaled"] = mural::jsonio::bbox_to_json(c.region_scaled);
    entry["bbox"] = mural::jsonio::bbox_to_json(c.region_original);
    entry["score"] = c.score;
    json dets = json::array();
    for (const mural::Detection& det : c.assigned_detections) {
      dets.push_back(detection_to_json(det, dataset));
    }
    entry["detections"] = std::move(dets);
    list.push_back(std::move(entry));
  }
  root["candidates"] = std::move(list);
  mural::jsonio::write_json_file(args.out, root);
  std::cout << "wrote " << candidates.size() << " candidates to " << args.out
            << "\n";
  return 0;
}

int run_select(const SelectArgs& args) {
  if (args.budget < 1) {
    throw mural::InputError("--budget must be >= 1");
  }
  const json dump = mural::jsonio::load_json_file(args.candidates);
  if (!dump.is_object()) {
    throw mural::InputError("candidates file is not a JSON object");
  }
  const int cycle = static_cast<int>(
      mural::jsonio::require_int64(dump, "cycle", "candidates file"));
  const int num_scales = static_cast<int>(
      mural::jsonio::require_int64(dump, "num_scales", "candidates file"));
  if (num_scales < 1) {
    throw mural::InputError("candidates file: num_scales must be >= 1");
  }

  const mural::DatasetState state = mural::load_state(args.state);
  if (state.cycle_index != cycle) {
    throw mural::InputError(
        "cycle mismatch: candidates were generated at cycle " +
        std::to_string(cycle) + " but the state is at cycle " +
        std::to_string(state.cycle_index));
  }

  const json& list =
      mural::jsonio::require(dump, "candidates", "candidates file");
  if (!list.is_array()) {
    throw mural::InputError("candidates file: 'candidates' must be an array");
  }
  std::vector<mural::RegionCandidate> candidates;
  candidates.reserve(list.size());
  for (size_t i = 0; i < list.size(); ++i) {
    const json& entry = list[i];
    const std::string record = "candidate #" + std::to_string(i);
    mural::RegionCandidate c;
    c.image_id = mural::jsonio::require_int64(entry, "image_id", record);
    c.scale_index = static_cast<int>(
        mural::jsonio::require_int64(entry, "scale", record));
    if (c.scale_index < 0 || c.scale_index >= num_scales) {
      throw mural::InputError(record + " has scale out of range");
    }
    if (entry.contains("scale_factor")) {
      c.scale_factor =
          mural::jsonio::require_double(entry, "scale_factor", record);
    }
    if (entry.contains("bbox_scaled")) {
      c.region_scaled = mural::jsonio::bbox_from_json(
          entry.at("bbox_scaled"), record);
    }
    c.region_original = mural::jsonio::bbox_from_json(
        mural::jsonio::require(entry, "bbox", record), record);
    c.score = mural::jsonio::require_double(entry, "score", record);
    const json& dets = mural::jsonio::require(entry, "detections", record);
    if (!dets.is_array()) {
      throw mural::InputError(record + ": 'detections' must be an array");
    }
    for (const json& d : dets) {
      mural::Detection det;
      det.image_id = mural::jsonio::require_int64(d, "image_id", record);
      // source-space category id, carried through untouched
      det.class_id = static_cast<int>(
          mural::jsonio::require_int64(d, "category_id", record));
      det.box = mural::jsonio::bbox_from_json(
          mural::jsonio::require(d, "bbox", record), record);
      det.confidence = mural::jsonio::require_double(d, "score", record);
      c.assigned_detections.push_back(std::move(det));
    }
    candidates.push_back(std::move(c));
  }

  // Without the dataset at hand, a region's annotation cost is proxied by
  // its assigned prediction count.
  const auto count = [](const mural::RegionCandidate& c) {
    return static_cast<int64_t>(c.assigned_detections.size());
  };
  const mural::SelectionResult result = mural::scale_aware_select(
      std::move(candidates), num_scales, args.budget, cycle, count);
  mural::write_selection_report(result, args.out);
  std::cout << "selected " << result.selected.size() << " regions consuming "
            << result.budget_consumed << " of " << result.budget_requested
            << (result.pool_exhausted ? " (pool exhausted)" : "") << "\n";
  return 0;
}

int run_simulate(const SimulateArgs& args) {
  if (args.strategy == "help") {
    for (const std::string& name : mural::strategy_names()) {
      std::cout << name << "\n";
    }
    return 0;
  }
  const auto strategy = mural::strategy_from_string(args.strategy);
  if (!strategy) {
    std::ostringstream msg;
    msg << "unknown strategy '" << args.strategy << "'; valid names:";
    for (const std::string& name : mural::strategy_names()) {
      msg << " " << name;
    }
    throw mural::InputError(msg.str());
  }
  if (args.dataset.empty()) throw mural::InputError("--dataset is required");
  if (args.out_dir.empty()) throw mural::InputError("--out-dir is required");

  const mural::Dataset dataset = mural::load_dataset(args.dataset);
  mural::RunConfig config = load_config_or_default(args.config);
  if (args.seed) {
    config.rng_seed = static_cast<uint64_t>(*args.seed);
  }

  const mural::RunResult result =
      mural::run_loop(dataset, config, *strategy);

  std::filesystem::create_directories(args.out_dir);
  const std::filesystem::path out_dir(args.out_dir);
  mural::write_run_log(result.reports, args.strategy,
                       out_dir / "run_log.jsonl");
  const std::vector<mural::MetricsRow> rows =
      mural::compute_metrics(result.reports, args.strategy,
                             dataset.vocab().size(), config.num_scales());
  mural::write_metrics_csv(rows, config.num_scales(),
                           out_dir / "metrics.csv");

  int64_t cumulative = 0;
  for (size_t i = 0; i < result.reports.size(); ++i) {
    const mural::CycleReport& report = result.reports[i];
    cumulative += report.budget_consumed;
    std::ostringstream line;
    line << "cycle " << report.cycle_index + 1 << "/" << config.num_cycles
         << " strategy=" << args.strategy
         << " regions=" << report.regions_selected
         << " new_labels=" << report.budget_consumed
         << " cumulative=" << cumulative << " entropy=" << std::fixed
         << std::setprecision(4) << rows[i].entropy;
    std::cout << line.str() << "\n";
  }
  if (result.pool_exhausted) {
    std::cout << "pool exhausted after " << result.reports.size()
              << " cycle(s)\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-scale region selection for annotation-efficient "
               "object detection"};
  app.require_subcommand(1);

  CandidatesArgs cand_args;
  CLI::App* cand = app.add_subcommand(
      "candidates", "Generate and score region candidates from predictions");
  cand->add_option("--dataset", cand_args.dataset, "Dataset JSON file")
      ->required();
  cand->add_option("--predictions", cand_args.predictions,
                   "Predictions JSON file")
      ->required();
  cand->add_option("--config", cand_args.config, "Run config JSON file");
  cand->add_option("--out", cand_args.out, "Output candidate dump path")
      ->required();

  SelectArgs select_args;
  CLI::App* select = app.add_subcommand(
      "select", "Budgeted scale-aware selection over a candidate dump");
  select->add_option("--candidates", select_args.candidates,
                     "Candidate dump from the candidates command")
      ->required();
  select->add_option("--state", select_args.state, "Labeling state JSON file")
      ->required();
  select->add_option("--budget", select_args.budget,
                     "Object-label budget (>= 1)")
      ->required();
  select->add_option("--out", select_args.out, "Output selection report path")
      ->required();

  SimulateArgs sim_args;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Run the simulated annotation loop end to end");
  // --dataset/--out-dir are checked after parsing so that
  // `simulate --strategy help` works without them.
  simulate->add_option("--dataset", sim_args.dataset, "Dataset JSON file");
  simulate->add_option("--config", sim_args.config, "Run config JSON file");
  simulate->add_option("--strategy", sim_args.strategy,
                       "Selection strategy ('help' lists names)")
      ->required();
  simulate->add_option("--seed", sim_args.seed,
                       "Seed overriding the config's rng_seed");
  simulate->add_option("--out-dir", sim_args.out_dir,
                       "Directory for run_log.jsonl and metrics.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (cand->parsed()) return run_candidates(cand_args);
    if (select->parsed()) return run_select(select_args);
    if (simulate->parsed()) return run_simulate(sim_args);
    std::cerr << "error: no command given\n";
    return 2;
  } catch (const mural::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
