#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "cmgec/cluster.hpp"
#include "cmgec/config.hpp"
#include "cmgec/dataset.hpp"
#include "cmgec/graphs.hpp"
#include "cmgec/matrix.hpp"
#include "cmgec/report.hpp"

namespace cmgec {

// Everything the per-seed runs share, derived once from the dataset.
struct PreparedData {
  std::size_t n = 0;
  int clusters = 0;
  std::vector<Matrix> features;         // min-max scaled when configured
  std::vector<ViewGraph> graphs;        // provided, or k-NN built from features with k_G
  std::vector<Matrix> targets;          // dense 0/1 edge indicators
  std::vector<Matrix> norm_adj;         // normalized real-weighted graphs
  std::vector<NeighborList> neighbors;  // k_M per view: k-NN for built graphs, SNN for provided
  std::optional<ClusterAssignment> labels;

  std::size_t v() const { return features.size(); }
};

// Per-column min-max scaling to [0, 1]; constant columns become 0.
Matrix minmax_scale(const Matrix& x);

// Throws ConfigError when the cluster count is unknown or k_G/k_M do not fit N.
PreparedData prepare(const MultiViewDataset& ds, const TrainConfig& cfg);

// View whose spectral_cut clustering has the lowest normalized cut on its own
// graph, or the highest ACC when select_by_labels is set and labels exist.
// Ties go to the lowest index.
std::size_t select_informative_view(const PreparedData& data, const TrainConfig& cfg);

struct SeedOutput {
  SeedRun run;
  std::optional<Matrix> consensus;  // A* for ablations that learn it
  std::optional<Matrix> embedding;  // Z for ablations that encode
};

SeedOutput run_seed(const PreparedData& data, const TrainConfig& cfg, std::size_t informative_view,
                    std::uint64_t seed);

struct RunOutput {
  MetricsReport report;
  SeedOutput first;  // seed cfg.seed, kept for export
};

// cfg.runs seeded runs with seeds cfg.seed, cfg.seed + 1, ...
RunOutput run(const TrainConfig& cfg, const MultiViewDataset& ds);

}  // namespace cmgec
