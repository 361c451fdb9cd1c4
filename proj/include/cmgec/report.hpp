#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include <json.hpp>

#include "cmgec/cluster.hpp"
#include "cmgec/config.hpp"

namespace cmgec {

struct SeedRun {
  std::uint64_t seed = 0;
  std::vector<int> labels;
  std::optional<ClusterMetrics> metrics;  // absent without ground truth
  std::vector<double> gfn_loss;           // total per epoch
  std::vector<double> mgae_loss;          // total per epoch
  double wall_seconds = 0.0;

  bool operator==(const SeedRun&) const = default;
};

struct MetricsReport {
  TrainConfig config;
  std::size_t n = 0;
  std::size_t v = 0;
  int clusters = 0;
  std::size_t informative_view = 0;
  std::vector<SeedRun> runs;
  std::optional<ClusterMetrics> mean;
  std::optional<ClusterMetrics> stddev;  // population standard deviation
  double wall_seconds = 0.0;
};

// Mean and population standard deviation over runs that carry metrics.
void summarize(MetricsReport& r);

nlohmann::json report_to_json(const MetricsReport& r);
MetricsReport report_from_json(const nlohmann::json& j);

void emit_report(const MetricsReport& r, const std::filesystem::path& path);
MetricsReport read_report(const std::filesystem::path& path);

}  // namespace cmgec
