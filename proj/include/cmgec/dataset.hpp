#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cmgec/cluster.hpp"
#include "cmgec/graphs.hpp"
#include "cmgec/matrix.hpp"

namespace cmgec {

enum class DatasetKind { features_only, features_plus_shared_graph, single_features_multi_graph };

std::string to_string(DatasetKind kind);
DatasetKind parse_dataset_kind(const std::string& s);

struct ViewData {
  std::optional<Matrix> features;
  std::optional<ViewGraph> graph;
};

struct MultiViewDataset {
  std::size_t n = 0;
  DatasetKind kind = DatasetKind::features_only;
  std::vector<ViewData> views;
  std::optional<ClusterAssignment> labels;
  std::optional<int> cluster_count;

  std::size_t v() const { return views.size(); }
  // Throws DataError when views disagree on N, the kind does not match the
  // fields present, or labels have the wrong length.
  void validate() const;
};

// Reads manifest.json plus the CSV files it names. Shared graphs and the single
// feature matrix of multi-graph datasets are copied to every view.
MultiViewDataset load_dataset(const std::filesystem::path& dir);
// Writes one CSV per view field plus manifest.json.
void save_dataset(const MultiViewDataset& ds, const std::filesystem::path& dir);

Matrix read_matrix_csv(const std::filesystem::path& path);
void write_matrix_csv(const Matrix& m, const std::filesystem::path& path);
ViewGraph read_edge_csv(const std::filesystem::path& path, std::size_t n);
void write_edge_csv(const ViewGraph& g, const std::filesystem::path& path);
std::vector<int> read_labels_csv(const std::filesystem::path& path);
void write_labels_csv(std::span<const int> labels, const std::filesystem::path& path);

}  // namespace cmgec
