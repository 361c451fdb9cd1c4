#include "cmgec/graphs.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cmgec/errors.hpp"

namespace cmgec {

namespace {

struct Candidate {
  double distance;
  std::size_t id;
};

// k nearest rows to `node`, ordered by (distance, id).
std::vector<Candidate> nearest(const Matrix& features, std::size_t node, std::size_t k,
                               DistanceMetric metric) {
  std::vector<Candidate> cands;
  cands.reserve(features.rows() - 1);
  for (std::size_t j = 0; j < features.rows(); ++j) {
    if (j == node) continue;
    cands.push_back({feature_distance(features.row(node), features.row(j), metric), j});
  }
  auto less = [](const Candidate& a, const Candidate& b) {
    return a.distance != b.distance ? a.distance < b.distance : a.id < b.id;
  };
  std::partial_sort(cands.begin(), cands.begin() + static_cast<std::ptrdiff_t>(k), cands.end(),
                    less);
  cands.resize(k);
  return cands;
}

void check_features(const Matrix& features, std::size_t k) {
  require(features.rows() >= 2, "k-NN: need at least two samples");
  require(k >= 1 && k < features.rows(),
          "k-NN: k=" + std::to_string(k) + " must satisfy 1 <= k < N=" +
              std::to_string(features.rows()));
  require(all_finite(features), "k-NN: features contain non-finite values");
}

}  // namespace

bool NeighborList::contains(std::size_t node, std::size_t other) const {
  const auto& row = per_node.at(node);
  return std::any_of(row.begin(), row.end(), [&](const Neighbor& nb) { return nb.id == other; });
}

double feature_distance(std::span<const double> a, std::span<const double> b,
                        DistanceMetric metric) {
  if (metric == DistanceMetric::euclidean) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double d = a[i] - b[i];
      s += d * d;
    }
    return std::sqrt(s);
  }
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  if (aa == 0.0 || bb == 0.0) return 1.0;
  return 1.0 - ab / std::sqrt(aa * bb);
}

ViewGraph build_knn_graph(const Matrix& features, std::size_t k, DistanceMetric metric) {
  check_features(features, k);
  std::vector<Edge> edges;
  edges.reserve(features.rows() * k);
  for (std::size_t i = 0; i < features.rows(); ++i)
    for (const Candidate& c : nearest(features, i, k, metric)) edges.push_back({i, c.id, 1.0});
  return {SparseAdjacency::from_edges(features.rows(), std::move(edges)), GraphSource::knn_built};
}

NeighborList knn_neighbors(const Matrix& features, std::size_t k, DistanceMetric metric) {
  check_features(features, k);
  NeighborList out;
  out.per_node.resize(features.rows());
  for (std::size_t i = 0; i < features.rows(); ++i)
    for (const Candidate& c : nearest(features, i, k, metric))
      out.per_node[i].push_back({c.id, 1.0 / (1.0 + c.distance)});
  return out;
}

NeighborList snn_neighbors(const ViewGraph& g, std::size_t k_m) {
  const auto nbrs = g.adjacency.neighbor_sets();
  NeighborList out;
  out.per_node.resize(g.n());
  std::vector<std::size_t> shared;
  for (std::size_t i = 0; i < g.n(); ++i) {
    auto& row = out.per_node[i];
    for (std::size_t j : nbrs[i]) {
      shared.clear();
      std::set_intersection(nbrs[i].begin(), nbrs[i].end(), nbrs[j].begin(), nbrs[j].end(),
                            std::back_inserter(shared));
      row.push_back({j, static_cast<double>(shared.size())});
    }
    std::stable_sort(row.begin(), row.end(), [](const Neighbor& a, const Neighbor& b) {
      return a.similarity != b.similarity ? a.similarity > b.similarity : a.id < b.id;
    });
    if (row.size() > k_m) row.resize(k_m);
  }
  return out;
}

Matrix normalize_adjacency(const Matrix& a) {
  require(a.rows() == a.cols(), "normalize_adjacency: matrix must be square");
  require(is_symmetric(a, 1e-8), "normalize_adjacency: matrix is not symmetric");
  const std::size_t n = a.rows();
  Matrix out = a;
  for (std::size_t i = 0; i < n; ++i) out(i, i) += 1.0;
  std::vector<double> inv_sqrt(n);
  for (std::size_t i = 0; i < n; ++i) {
    double deg = 0.0;
    for (double x : out.row(i)) {
      require(x >= 0.0, "normalize_adjacency: negative weight");
      deg += x;
    }
    inv_sqrt[i] = 1.0 / std::sqrt(deg);
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) *= inv_sqrt[i] * inv_sqrt[j];
  return out;
}

Matrix normalize_adjacency(const ViewGraph& g) { return normalize_adjacency(g.dense()); }

Matrix laplacian(const Matrix& a) {
  require(a.rows() == a.cols(), "laplacian: matrix must be square");
  require(is_symmetric(a, 1e-8), "laplacian: matrix is not symmetric");
  const std::size_t n = a.rows();
  Matrix l(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    double deg = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) {
        l(i, j) = -a(i, j);
        deg += a(i, j);
      }
    }
    l(i, i) = deg;
  }
  return l;
}

}  // namespace cmgec
