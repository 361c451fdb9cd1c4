#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "cmgec/cluster.hpp"
#include "cmgec/eigen.hpp"
#include "cmgec/errors.hpp"
#include "cmgec/graphs.hpp"

namespace cmgec {

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

Matrix seed_centroids(const Matrix& points, int c, Rng& rng) {
  const std::size_t n = points.rows();
  Matrix centroids(static_cast<std::size_t>(c), points.cols());
  std::vector<char> chosen(n, 0);
  std::uniform_int_distribution<std::size_t> first(0, n - 1);
  std::size_t pick = first(rng);
  std::vector<double> best(n, std::numeric_limits<double>::infinity());

  for (int k = 0; k < c; ++k) {
    if (k > 0) {
      double total = 0.0;
      for (double d : best) total += d;
      if (total > 0.0) {
        std::uniform_real_distribution<double> u(0.0, total);
        double target = u(rng);
        pick = n - 1;
        for (std::size_t i = 0; i < n; ++i) {
          if (best[i] <= 0.0) continue;
          target -= best[i];
          if (target <= 0.0) {
            pick = i;
            break;
          }
        }
        while (best[pick] <= 0.0) --pick;  // float slack landed on a zero-weight tail
      } else {
        // All remaining points coincide with a chosen centroid.
        std::vector<std::size_t> rest;
        for (std::size_t i = 0; i < n; ++i)
          if (!chosen[i]) rest.push_back(i);
        std::uniform_int_distribution<std::size_t> any(0, rest.size() - 1);
        pick = rest[any(rng)];
      }
    }
    chosen[pick] = 1;
    std::copy(points.row(pick).begin(), points.row(pick).end(),
              centroids.row(static_cast<std::size_t>(k)).begin());
    for (std::size_t i = 0; i < n; ++i)
      best[i] = std::min(best[i], squared_distance(points.row(i), points.row(pick)));
  }
  return centroids;
}

}  // namespace

ClusterAssignment ClusterAssignment::from_raw(std::span<const int> raw) {
  std::map<int, int> ids;
  for (int x : raw) ids.emplace(x, 0);
  int next = 0;
  for (auto& [raw_id, id] : ids) id = next++;
  ClusterAssignment a;
  a.c = next;
  a.labels.reserve(raw.size());
  for (int x : raw) a.labels.push_back(ids[x]);
  return a;
}

void ClusterAssignment::validate() const {
  require(c >= 1, "ClusterAssignment: cluster count must be at least 1");
  for (int l : labels)
    require(l >= 0 && l < c, "ClusterAssignment: label " + std::to_string(l) + " outside [0, " +
                                 std::to_string(c) + ")");
}

KMeansResult kmeans_pp(const Matrix& points, int c, Rng& rng, std::size_t max_iter) {
  const std::size_t n = points.rows();
  require(c >= 1 && static_cast<std::size_t>(c) <= n,
          "kmeans_pp: cluster count " + std::to_string(c) + " outside [1, " + std::to_string(n) +
              "]");
  require(max_iter >= 1, "kmeans_pp: max_iter must be at least 1");
  require(all_finite(points), "kmeans_pp: points contain non-finite values");

  KMeansResult r;
  r.centroids = seed_centroids(points, c, rng);
  r.assignment.c = c;
  std::vector<int>& labels = r.assignment.labels;
  std::vector<int> previous;
  std::vector<double> dist(n);
  const std::size_t k = static_cast<std::size_t>(c);

  for (std::size_t iter = 0; iter < max_iter; ++iter) {
    labels.assign(n, 0);
    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < k; ++j) {
        const double d = squared_distance(points.row(i), r.centroids.row(j));
        if (d < best) {
          best = d;
          labels[i] = static_cast<int>(j);
        }
      }
      dist[i] = best;
      inertia += best;
    }
    r.inertia = inertia;
    r.inertia_history.push_back(inertia);
    r.iterations = iter + 1;
    if (labels == previous) break;
    previous = labels;

    Matrix sums(k, points.cols());
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = static_cast<std::size_t>(labels[i]);
      ++counts[j];
      auto row = sums.row(j);
      auto p = points.row(i);
      for (std::size_t d = 0; d < row.size(); ++d) row[d] += p[d];
    }
    for (std::size_t j = 0; j < k; ++j) {
      if (counts[j] == 0) continue;
      auto row = r.centroids.row(j);
      auto s = sums.row(j);
      for (std::size_t d = 0; d < row.size(); ++d) row[d] = s[d] / static_cast<double>(counts[j]);
    }
    for (std::size_t j = 0; j < k; ++j) {
      if (counts[j] != 0) continue;
      std::size_t far = 0;
      for (std::size_t i = 1; i < n; ++i)
        if (dist[i] > dist[far]) far = i;
      std::copy(points.row(far).begin(), points.row(far).end(), r.centroids.row(j).begin());
      dist[far] = 0.0;
    }
  }
  return r;
}

KMeansResult kmeans_best_of(const Matrix& points, int c, Rng& rng, std::size_t restarts,
                            std::size_t max_iter) {
  require(restarts >= 1, "kmeans_best_of: restarts must be at least 1");
  KMeansResult best = kmeans_pp(points, c, rng, max_iter);
  for (std::size_t r = 1; r < restarts; ++r) {
    KMeansResult next = kmeans_pp(points, c, rng, max_iter);
    if (next.inertia < best.inertia) best = std::move(next);
  }
  return best;
}

ClusterAssignment spectral_cut(const Matrix& adjacency, int c, Rng& rng) {
  require(c >= 1 && static_cast<std::size_t>(c) <= adjacency.rows(),
          "spectral_cut: cluster count out of range");
  const EigenResult eig = sym_eig(laplacian(adjacency), static_cast<std::size_t>(c));
  return kmeans_best_of(eig.vectors, c, rng).assignment;
}

namespace {

struct CutTotals {
  std::vector<double> cut;
  std::vector<double> volume;
  std::vector<double> size;
};

CutTotals cut_totals(const Matrix& adjacency, const ClusterAssignment& a) {
  require(adjacency.rows() == a.size() && adjacency.cols() == a.size(),
          "cut: adjacency does not match assignment size");
  a.validate();
  CutTotals t{std::vector<double>(a.c), std::vector<double>(a.c), std::vector<double>(a.c)};
  for (std::size_t i = 0; i < a.size(); ++i) {
    const int ci = a.labels[i];
    t.size[ci] += 1.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (i == j) continue;
      t.volume[ci] += adjacency(i, j);
      if (a.labels[j] != ci) t.cut[ci] += adjacency(i, j);
    }
  }
  return t;
}

}  // namespace

double ratio_cut(const Matrix& adjacency, const ClusterAssignment& a) {
  const CutTotals t = cut_totals(adjacency, a);
  double total = 0.0;
  for (int k = 0; k < a.c; ++k)
    if (t.size[k] > 0.0) total += t.cut[k] / t.size[k];
  return total;
}

double normalized_cut(const Matrix& adjacency, const ClusterAssignment& a) {
  const CutTotals t = cut_totals(adjacency, a);
  double total = 0.0;
  for (int k = 0; k < a.c; ++k)
    if (t.volume[k] > 0.0) total += t.cut[k] / t.volume[k];
  return total;
}

}  // namespace cmgec
