#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "mural/dataset.hpp"
#include "mural/report.hpp"

namespace mural {

/// Shannon entropy in nats of the empirical distribution of `counts`.
/// Zero-count bins contribute nothing; an all-zero vector scores 0.
double entropy_nats(std::span<const int64_t> counts);

/// KL(empirical || uniform) = ln(K) - H. An all-zero vector scores ln(K).
double kl_to_uniform_nats(std::span<const int64_t> counts);

struct MetricsRow {
  int cycle_index = 0;
  std::string strategy;
  double entropy = 0.0;     // cumulative over all labels bought so far
  double kl_uniform = 0.0;
  int64_t labels_cum = 0;
  std::vector<double> per_scale_share;  // cumulative label share per scale

  bool operator==(const MetricsRow&) const = default;
};

/// One row per report, cumulative from the first cycle (seed labels are not
/// counted; only what the strategy bought).
std::vector<MetricsRow> compute_metrics(std::span<const CycleReport> reports,
                                        const std::string& strategy,
                                        int num_classes, int num_scales);

/// num_scales fixes the per_scale_* column count even when rows is empty.
void write_metrics_csv(std::span<const MetricsRow> rows, int num_scales,
                       const std::filesystem::path& path);

/// JSONL: one object per cycle report.
void write_run_log(std::span<const CycleReport> reports,
                   const std::string& strategy,
                   const std::filesystem::path& path);

}  // namespace mural
