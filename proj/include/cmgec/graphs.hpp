#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cmgec/matrix.hpp"
#include "cmgec/sparse.hpp"

namespace cmgec {

enum class GraphSource { knn_built, provided };
enum class DistanceMetric { euclidean, cosine };

struct ViewGraph {
  SparseAdjacency adjacency;
  GraphSource source = GraphSource::provided;

  std::size_t n() const { return adjacency.n(); }
  Matrix dense() const { return adjacency.to_dense(); }
};

struct Neighbor {
  std::size_t id = 0;
  double similarity = 0.0;

  bool operator==(const Neighbor&) const = default;
};

// Per-node neighbors sorted by descending similarity, ties by ascending id.
struct NeighborList {
  std::vector<std::vector<Neighbor>> per_node;

  std::size_t n() const { return per_node.size(); }
  bool contains(std::size_t node, std::size_t other) const;
};

double feature_distance(std::span<const double> a, std::span<const double> b,
                        DistanceMetric metric);

// Binary k-NN graph, symmetrized by union, zero diagonal. Distance ties go to the
// lower node index. Requires k < N.
ViewGraph build_knn_graph(const Matrix& features, std::size_t k,
                          DistanceMetric metric = DistanceMetric::euclidean);

// Directed k nearest neighbors of each row, similarity 1/(1+distance).
NeighborList knn_neighbors(const Matrix& features, std::size_t k,
                           DistanceMetric metric = DistanceMetric::euclidean);

// Shared-nearest-neighbor selection on a graph: for adjacent i, j the similarity
// is |N(i) ∩ N(j)| with N excluding the node itself; non-adjacent pairs score 0
// and are never selected. Keeps the k_m best per node.
NeighborList snn_neighbors(const ViewGraph& g, std::size_t k_m);

// D̃^{-1/2} (A + I) D̃^{-1/2}.
Matrix normalize_adjacency(const ViewGraph& g);
Matrix normalize_adjacency(const Matrix& a);

// D − A. Throws ContractError if a is asymmetric beyond 1e-8.
Matrix laplacian(const Matrix& a);

}  // namespace cmgec
