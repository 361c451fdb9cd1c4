#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cmgec/matrix.hpp"
#include "cmgec/optim.hpp"

namespace cmgec {

struct ClusterAssignment {
  std::vector<int> labels;  // each in [0, c)
  int c = 0;

  std::size_t size() const { return labels.size(); }
  // Relabels arbitrary integer ids to 0..c−1 in ascending order of id.
  static ClusterAssignment from_raw(std::span<const int> raw);
  void validate() const;
};

struct KMeansResult {
  ClusterAssignment assignment;
  Matrix centroids;
  double inertia = 0.0;
  std::vector<double> inertia_history;  // after each assignment step
  std::size_t iterations = 0;
};

// k-means++ seeding then Lloyd iterations until the assignment stops changing
// or max_iter is hit. An empty cluster is re-seeded at the point farthest from
// its current centroid.
KMeansResult kmeans_pp(const Matrix& points, int c, Rng& rng, std::size_t max_iter = 300);

// Best of `restarts` independent runs by inertia.
KMeansResult kmeans_best_of(const Matrix& points, int c, Rng& rng, std::size_t restarts = 20,
                            std::size_t max_iter = 300);

// Ratio-cut relaxation: k-means++ on the rows of the c smallest eigenvectors of D − A.
ClusterAssignment spectral_cut(const Matrix& adjacency, int c, Rng& rng);

// Σ_k cut(C_k, rest) / |C_k| over non-empty clusters.
double ratio_cut(const Matrix& adjacency, const ClusterAssignment& a);
// Σ_k cut(C_k, rest) / vol(C_k) over non-empty clusters with positive volume.
double normalized_cut(const Matrix& adjacency, const ClusterAssignment& a);

// Minimum-cost perfect matching on a square cost matrix; returns column per row.
std::vector<std::size_t> solve_assignment(const Matrix& cost);

// rows: predicted cluster, cols: true class
Matrix contingency(const ClusterAssignment& pred, const ClusterAssignment& truth);

double accuracy_hungarian(const ClusterAssignment& pred, const ClusterAssignment& truth);

struct InfoMetrics {
  double nmi = 0.0;
  double ami = 0.0;
  double ari = 0.0;
};

// NMI with arithmetic-mean normalization, AMI with the hypergeometric expected
// mutual information, pair-counting ARI.
InfoMetrics info_metrics(const ClusterAssignment& pred, const ClusterAssignment& truth);

// Macro F1 over true classes after the Hungarian label mapping; accuracy ties
// go to the mapping with the higher F1.
double f1_macro(const ClusterAssignment& pred, const ClusterAssignment& truth);

struct ClusterMetrics {
  double acc = 0.0;
  double nmi = 0.0;
  double ari = 0.0;
  double ami = 0.0;
  double f1 = 0.0;

  bool operator==(const ClusterMetrics&) const = default;
};

ClusterMetrics evaluate(const ClusterAssignment& pred, const ClusterAssignment& truth);

}  // namespace cmgec
