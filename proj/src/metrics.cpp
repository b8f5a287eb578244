#include "mural/metrics.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "json_util.hpp"
#include "mural/errors.hpp"

namespace mural {

namespace {

/// Shortest round-trip decimal form; keeps CSV output byte-stable without
/// locale or printf precision surprises.
std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw std::logic_error("format_double failed");
  return std::string(buf, ptr);
}

}  // namespace

double entropy_nats(std::span<const int64_t> counts) {
  const int64_t total =
      std::accumulate(counts.begin(), counts.end(), int64_t{0});
  if (total <= 0) return 0.0;
  double h = 0.0;
  for (int64_t c : counts) {
    if (c <= 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log(p);
  }
  return h;
}

double kl_to_uniform_nats(std::span<const int64_t> counts) {
  if (counts.empty()) {
    throw std::invalid_argument("kl_to_uniform_nats: empty vocabulary");
  }
  return std::log(static_cast<double>(counts.size())) - entropy_nats(counts);
}

std::vector<MetricsRow> compute_metrics(std::span<const CycleReport> reports,
                                        const std::string& strategy,
                                        int num_classes, int num_scales) {
  std::vector<int64_t> cum_class(static_cast<size_t>(num_classes), 0);
  std::vector<int64_t> cum_scale(static_cast<size_t>(num_scales), 0);
  int64_t labels_cum = 0;

  std::vector<MetricsRow> rows;
  rows.reserve(reports.size());
  for (const CycleReport& report : reports) {
    if (report.annotated_per_class.size() != cum_class.size() ||
        report.annotated_per_scale.size() != cum_scale.size()) {
      throw std::invalid_argument("compute_metrics: report shape mismatch");
    }
    for (size_t i = 0; i < cum_class.size(); ++i) {
      cum_class[i] += report.annotated_per_class[i];
    }
    for (size_t i = 0; i < cum_scale.size(); ++i) {
      cum_scale[i] += report.annotated_per_scale[i];
    }
    labels_cum += report.budget_consumed;

    MetricsRow row;
    row.cycle_index = report.cycle_index;
    row.strategy = strategy;
    row.entropy = entropy_nats(cum_class);
    row.kl_uniform = kl_to_uniform_nats(cum_class);
    row.labels_cum = labels_cum;
    row.per_scale_share.reserve(cum_scale.size());
    for (int64_t c : cum_scale) {
      row.per_scale_share.push_back(
          labels_cum > 0
              ? static_cast<double>(c) / static_cast<double>(labels_cum)
              : 0.0);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_metrics_csv(std::span<const MetricsRow> rows, int num_scales,
                       const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write file: " + path.string());
  out << "cycle,strategy,entropy,kl_uniform,labels_cum";
  for (int s = 0; s < num_scales; ++s) out << ",per_scale_" << s;
  out << '\n';
  for (const MetricsRow& row : rows) {
    if (row.per_scale_share.size() != static_cast<size_t>(num_scales)) {
      throw std::invalid_argument("write_metrics_csv: row shape mismatch");
    }
    out << row.cycle_index << ',' << row.strategy << ','
        << format_double(row.entropy) << ',' << format_double(row.kl_uniform)
        << ',' << row.labels_cum;
    for (double share : row.per_scale_share) {
      out << ',' << format_double(share);
    }
    out << '\n';
  }
  if (!out) throw InputError("write failed: " + path.string());
}

void write_run_log(std::span<const CycleReport> reports,
                   const std::string& strategy,
                   const std::filesystem::path& path) {
  using jsonio::json;
  std::ofstream out(path);
  if (!out) throw InputError("cannot write file: " + path.string());
  for (const CycleReport& report : reports) {
    json line = json::object();
    line["cycle"] = report.cycle_index;
    line["strategy"] = strategy;
    line["budget_requested"] = report.budget_requested;
    line["budget_consumed"] = report.budget_consumed;
    line["regions_selected"] = report.regions_selected;
    line["annotated_per_class"] = report.annotated_per_class;
    line["annotated_per_scale"] = report.annotated_per_scale;
    line["selected_class_entropy"] = report.selected_class_entropy;
    line["kl_to_uniform"] = report.kl_to_uniform;
    out << line.dump() << '\n';
  }
  if (!out) throw InputError("write failed: " + path.string());
}

}  // namespace mural
