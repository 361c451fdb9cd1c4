#include "cmgec/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cmgec/errors.hpp"

namespace cmgec {

SparseAdjacency SparseAdjacency::from_edges(std::size_t n, std::vector<Edge> edges) {
  std::vector<Edge> both;
  both.reserve(edges.size() * 2);
  for (const Edge& e : edges) {
    if (e.row >= n || e.col >= n) {
      throw ContractError("SparseAdjacency: edge (" + std::to_string(e.row) + "," +
                          std::to_string(e.col) + ") out of range for n=" + std::to_string(n));
    }
    if (!(e.weight >= 0.0) || !std::isfinite(e.weight)) {
      throw ContractError("SparseAdjacency: invalid weight on edge (" + std::to_string(e.row) +
                          "," + std::to_string(e.col) + ")");
    }
    if (e.weight == 0.0) continue;
    both.push_back(e);
    if (e.row != e.col) both.push_back({e.col, e.row, e.weight});
  }
  std::sort(both.begin(), both.end(), [](const Edge& a, const Edge& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  SparseAdjacency out(n);
  for (const Edge& e : both) {
    if (!out.entries_.empty() && out.entries_.back().row == e.row &&
        out.entries_.back().col == e.col) {
      if (out.entries_.back().weight != e.weight) {
        throw ContractError("SparseAdjacency: conflicting weights for edge (" +
                            std::to_string(e.row) + "," + std::to_string(e.col) + ")");
      }
      continue;
    }
    out.entries_.push_back(e);
  }
  return out;
}

SparseAdjacency SparseAdjacency::from_dense(const Matrix& dense, double symmetry_tol) {
  require(dense.rows() == dense.cols(), "SparseAdjacency::from_dense: matrix must be square");
  require(is_symmetric(dense, symmetry_tol), "SparseAdjacency::from_dense: matrix not symmetric");
  SparseAdjacency out(dense.rows());
  for (std::size_t i = 0; i < dense.rows(); ++i) {
    for (std::size_t j = 0; j < dense.cols(); ++j) {
      const double w = dense(i, j);
      require(w >= 0.0, "SparseAdjacency::from_dense: negative weight");
      if (w != 0.0) out.entries_.push_back({i, j, w});
    }
  }
  return out;
}

bool SparseAdjacency::has_self_loops() const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [](const Edge& e) { return e.row == e.col; });
}

Matrix SparseAdjacency::to_dense() const {
  Matrix m(n_, n_);
  for (const Edge& e : entries_) m(e.row, e.col) = e.weight;
  return m;
}

std::vector<std::vector<std::size_t>> SparseAdjacency::neighbor_sets() const {
  std::vector<std::vector<std::size_t>> nbrs(n_);
  for (const Edge& e : entries_)
    if (e.row != e.col) nbrs[e.row].push_back(e.col);
  return nbrs;
}

}  // namespace cmgec
