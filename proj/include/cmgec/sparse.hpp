#pragma once

#include <cstddef>
#include <vector>

#include "cmgec/matrix.hpp"

namespace cmgec {

struct Edge {
  std::size_t row = 0;
  std::size_t col = 0;
  double weight = 0.0;

  bool operator==(const Edge&) const = default;
};

// Symmetric nonnegative adjacency in coordinate form. Entries are kept sorted by
// (row, col) and both orientations of every off-diagonal edge are stored.
class SparseAdjacency {
 public:
  SparseAdjacency() = default;
  explicit SparseAdjacency(std::size_t n) : n_(n) {}

  // Builds from an edge list; each undirected edge may be given in one or both
  // orientations. Zero weights are dropped. Throws ContractError on negative
  // weights, out-of-range ids or conflicting duplicate weights.
  static SparseAdjacency from_edges(std::size_t n, std::vector<Edge> edges);
  static SparseAdjacency from_dense(const Matrix& dense, double symmetry_tol = 1e-12);

  std::size_t n() const { return n_; }
  const std::vector<Edge>& entries() const { return entries_; }
  std::size_t nonzeros() const { return entries_.size(); }
  bool has_self_loops() const;

  Matrix to_dense() const;
  // Per-node neighbor ids in ascending order.
  std::vector<std::vector<std::size_t>> neighbor_sets() const;

  bool operator==(const SparseAdjacency&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<Edge> entries_;
};

}  // namespace cmgec
