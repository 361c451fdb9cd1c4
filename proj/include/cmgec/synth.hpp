#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cmgec/dataset.hpp"
#include "cmgec/graphs.hpp"
#include "cmgec/optim.hpp"

namespace cmgec {

struct SynthSpec {
  int clusters = 3;
  std::size_t n = 90;
  std::size_t views = 2;
  std::size_t dim = 10;            // per view; must be at least clusters
  double sigma = 1.0;
  double separation = 10.0;        // distance between any two centers, in units of sigma
  // Per view, the fraction of samples drawn around a wrong center in that view.
  std::vector<double> corrupt_fraction;
  // Per view, std of extra isotropic Gaussian noise in units of sigma.
  std::vector<double> extra_noise;
  DatasetKind kind = DatasetKind::features_only;
  // Graph kinds only: k of the k-NN graph built from the clean features, and the
  // per-view fraction of edges rewired by perturb_edges.
  std::size_t graph_k = 10;
  std::vector<double> edge_noise;
  std::uint64_t seed = 0;
};

// Gaussian blobs around simplex-placed centers; sample i belongs to cluster
// i·c/n. Views draw independent noise around the same centers.
MultiViewDataset make_synthetic(const SynthSpec& spec);

// Removes round(fraction·|E|) random edges and adds as many random non-edges
// with weight 1, keeping the edge count.
ViewGraph perturb_edges(const ViewGraph& g, double fraction, Rng& rng);

}  // namespace cmgec
