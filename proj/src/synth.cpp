#include "cmgec/synth.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "cmgec/errors.hpp"

namespace cmgec {

namespace {

Matrix blob_features(const SynthSpec& spec, const std::vector<int>& labels, double corrupt,
                     double extra, Rng& rng) {
  // Scaled basis vectors are pairwise separation·sigma apart.
  const double scale = spec.separation * spec.sigma / std::sqrt(2.0);
  std::normal_distribution<double> noise(0.0, spec.sigma * std::sqrt(1.0 + extra * extra));
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> other(1, std::max(1, spec.clusters - 1));
  Matrix x(spec.n, spec.dim);
  for (std::size_t i = 0; i < spec.n; ++i) {
    int center = labels[i];
    if (spec.clusters > 1 && coin(rng) < corrupt) center = (center + other(rng)) % spec.clusters;
    for (std::size_t d = 0; d < spec.dim; ++d) {
      x(i, d) = noise(rng);
      if (d == static_cast<std::size_t>(center)) x(i, d) += scale;
    }
  }
  return x;
}

double fraction_at(const std::vector<double>& v, std::size_t i) {
  return i < v.size() ? v[i] : 0.0;
}

}  // namespace

MultiViewDataset make_synthetic(const SynthSpec& spec) {
  require(spec.clusters >= 1, "make_synthetic: clusters must be positive");
  require(spec.n >= static_cast<std::size_t>(spec.clusters) && spec.n >= 2,
          "make_synthetic: need at least one sample per cluster");
  require(spec.views >= 1, "make_synthetic: views must be positive");
  require(spec.dim >= static_cast<std::size_t>(spec.clusters),
          "make_synthetic: dim must be at least the cluster count");
  require(spec.sigma > 0.0 && spec.separation >= 0.0, "make_synthetic: invalid sigma/separation");
  for (double f : spec.corrupt_fraction)
    require(f >= 0.0 && f <= 1.0, "make_synthetic: corrupt fraction outside [0, 1]");
  for (double f : spec.extra_noise) require(f >= 0.0, "make_synthetic: extra noise must be nonnegative");
  for (double f : spec.edge_noise)
    require(f >= 0.0 && f <= 1.0, "make_synthetic: edge noise outside [0, 1]");

  Rng rng = derive_rng(spec.seed, 101);
  std::vector<int> labels(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i)
    labels[i] = static_cast<int>(i * static_cast<std::size_t>(spec.clusters) / spec.n);

  MultiViewDataset ds;
  ds.n = spec.n;
  ds.kind = spec.kind;
  ds.labels = ClusterAssignment::from_raw(labels);
  ds.cluster_count = spec.clusters;
  ds.views.resize(spec.views);

  switch (spec.kind) {
    case DatasetKind::features_only:
      for (std::size_t v = 0; v < spec.views; ++v)
        ds.views[v].features = blob_features(spec, labels, fraction_at(spec.corrupt_fraction, v),
                                   fraction_at(spec.extra_noise, v), rng);
      break;
    case DatasetKind::features_plus_shared_graph: {
      std::vector<Matrix> feats;
      for (std::size_t v = 0; v < spec.views; ++v)
        feats.push_back(blob_features(spec, labels, fraction_at(spec.corrupt_fraction, v),
                                   fraction_at(spec.extra_noise, v), rng));
      const Matrix clean = blob_features(spec, labels, 0.0, 0.0, rng);
      ViewGraph g = perturb_edges(build_knn_graph(clean, spec.graph_k),
                                  fraction_at(spec.edge_noise, 0), rng);
      g.source = GraphSource::provided;
      for (std::size_t v = 0; v < spec.views; ++v) {
        ds.views[v].features = std::move(feats[v]);
        ds.views[v].graph = g;
      }
      break;
    }
    case DatasetKind::single_features_multi_graph: {
      const Matrix x = blob_features(spec, labels, fraction_at(spec.corrupt_fraction, 0),
                                     fraction_at(spec.extra_noise, 0), rng);
      for (std::size_t v = 0; v < spec.views; ++v) {
        const Matrix clean = blob_features(spec, labels, 0.0, 0.0, rng);
        ViewGraph g = perturb_edges(build_knn_graph(clean, spec.graph_k),
                                    fraction_at(spec.edge_noise, v), rng);
        g.source = GraphSource::provided;
        ds.views[v].features = x;
        ds.views[v].graph = std::move(g);
      }
      break;
    }
  }
  ds.validate();
  return ds;
}

ViewGraph perturb_edges(const ViewGraph& g, double fraction, Rng& rng) {
  require(fraction >= 0.0 && fraction <= 1.0, "perturb_edges: fraction outside [0, 1]");
  const std::size_t n = g.n();
  std::set<std::pair<std::size_t, std::size_t>> edges;
  for (const Edge& e : g.adjacency.entries())
    if (e.row < e.col) edges.emplace(e.row, e.col);
  const std::size_t total_pairs = n * (n - 1) / 2;
  const std::size_t swaps = std::min(
      static_cast<std::size_t>(std::llround(fraction * static_cast<double>(edges.size()))),
      total_pairs - edges.size());
  if (swaps == 0) return g;

  std::vector<std::pair<std::size_t, std::size_t>> existing(edges.begin(), edges.end());
  std::shuffle(existing.begin(), existing.end(), rng);
  std::set<std::pair<std::size_t, std::size_t>> removed(existing.begin(),
                                                        existing.begin() + swaps);
  std::set<std::pair<std::size_t, std::size_t>> added;
  std::uniform_int_distribution<std::size_t> node(0, n - 1);
  while (added.size() < swaps) {
    std::size_t a = node(rng), b = node(rng);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    if (edges.contains({a, b}) || added.contains({a, b})) continue;
    added.emplace(a, b);
  }

  std::vector<Edge> out;
  for (const Edge& e : g.adjacency.entries())
    if (e.row < e.col && !removed.contains({e.row, e.col})) out.push_back(e);
  for (const auto& [a, b] : added) out.push_back({a, b, 1.0});
  return {SparseAdjacency::from_edges(n, std::move(out)), g.source};
}

}  // namespace cmgec
