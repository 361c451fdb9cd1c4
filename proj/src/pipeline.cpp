#include "cmgec/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "cmgec/errors.hpp"
#include "cmgec/gfn.hpp"
#include "cmgec/mgae.hpp"
#include "cmgec/mmim.hpp"

namespace cmgec {

namespace {

// Stream ids for derive_rng within one seeded run.
constexpr std::uint64_t kEncoderStream = 2;
constexpr std::uint64_t kPairStream = 3;
constexpr std::uint64_t kKMeansStream = 4;
constexpr std::uint64_t kSpectralStream = 5;
constexpr std::uint64_t kSelectionStream = 7;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Matrix binarize(const ViewGraph& g) {
  Matrix out(g.n(), g.n());
  for (const Edge& e : g.adjacency.entries())
    if (e.row != e.col) out(e.row, e.col) = 1.0;
  return out;
}

int resolve_clusters(const MultiViewDataset& ds, const TrainConfig& cfg) {
  if (cfg.clusters) return *cfg.clusters;
  if (ds.labels) return ds.labels->c;
  if (ds.cluster_count) return *ds.cluster_count;
  throw ConfigError("cluster count unknown: supply labels or set clusters");
}

std::vector<DistanceMetric> view_metrics(const std::string& spec, std::size_t views) {
  std::vector<DistanceMetric> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = spec.find(',', start);
    const std::string item = spec.substr(start, comma - start);
    if (item == "euclidean") out.push_back(DistanceMetric::euclidean);
    else if (item == "cosine") out.push_back(DistanceMetric::cosine);
    else throw ConfigError("distance: unknown metric '" + item + "'");
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.size() == 1) out.resize(views, out.front());
  if (out.size() != views) {
    throw ConfigError("distance: " + std::to_string(out.size()) + " metrics for " +
                      std::to_string(views) + " views");
  }
  return out;
}

bool uses_gfn(Ablation a) {
  return a == Ablation::full || a == Ablation::m_only || a == Ablation::cgg;
}

bool uses_mim(Ablation a) { return a == Ablation::full || a == Ablation::g; }

GfnTrainOptions gfn_options(const TrainConfig& cfg, int clusters, std::uint64_t seed) {
  GfnTrainOptions o;
  o.epochs = cfg.epochs_gfn;
  o.q_refresh = cfg.q_refresh;
  o.clusters = static_cast<std::size_t>(clusters);
  o.depth = cfg.gfn_depth;
  o.lambda1 = cfg.lambda1;
  o.warmup = cfg.gfn_warmup;
  o.adam.lr = cfg.lr_gfn;
  o.seed = seed;
  return o;
}

void check_finite(double loss, const char* stage, std::size_t epoch) {
  if (!std::isfinite(loss)) {
    throw NumericalError(std::string(stage) + ": loss became non-finite at epoch " +
                         std::to_string(epoch));
  }
}

// M-GAE (+ MMIM) training. With a GFN trainer, GFN and M-GAE epochs alternate
// and the consensus adjacency follows the current A*.
struct MgaeTraining {
  const PreparedData& data;
  const TrainConfig& cfg;
  std::uint64_t seed;
  bool with_mim;

  Matrix train(MgaeInputs& inputs, GfnTrainer* joint, std::vector<double>& history) const {
    Rng init_rng = derive_rng(seed, kEncoderStream);
    Rng pair_rng = derive_rng(seed, kPairStream);
    std::vector<std::size_t> dims;
    for (const Matrix& x : data.features) dims.push_back(x.cols());
    EncoderParams encoder = init_encoder(dims, {cfg.h1, cfg.h2, cfg.m}, init_rng);
    DecoderParams decoders = init_decoders(data.v(), cfg.m, init_rng);
    DiscriminatorParams disc = init_discriminator(cfg.m, init_rng);
    const double lambda2 = with_mim ? cfg.lambda2 : 0.0;
    AdamConfig adam;
    adam.lr = cfg.lr;

    auto zero = [](ParamTensor& p) { p.zero_grad(); };
    auto step = [&](ParamTensor& p) { adam_update(p, adam); };
    const std::size_t epochs =
        joint != nullptr ? std::max(cfg.epochs_mgae, cfg.epochs_gfn) : cfg.epochs_mgae;
    history.reserve(cfg.epochs_mgae);
    for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
      if (joint != nullptr && joint->epoch() < cfg.epochs_gfn) {
        joint->step();
        inputs.consensus_norm_adj = normalize_adjacency(joint->a_star());
      }
      if (epoch >= cfg.epochs_mgae) continue;

      PairBatch batch;
      if (lambda2 > 0.0) batch = sample_pairs(data.neighbors, pair_rng);
      encoder.visit(zero);
      decoders.visit(zero);
      disc.visit(zero);
      MgaeLossParts parts;
      if (cfg.mim_alternating && lambda2 > 0.0 && !batch.empty()) {
        const Matrix z = encode(inputs, encoder).z;
        mim_loss_and_grad(z, batch, disc, nullptr, true, lambda2);
        disc.visit(step);
        disc.visit(zero);
        parts = mgae_loss_and_grad(encoder, decoders, &disc, inputs, &batch, lambda2, false);
      } else {
        parts = mgae_loss_and_grad(encoder, decoders, &disc, inputs, &batch, lambda2, true);
        disc.visit(step);
      }
      check_finite(parts.total, "mgae", epoch);
      history.push_back(parts.total);
      encoder.visit(step);
      decoders.visit(step);
    }
    return encode(inputs, encoder).z;
  }
};

}  // namespace

Matrix minmax_scale(const Matrix& x) {
  Matrix out(x.rows(), x.cols());
  for (std::size_t j = 0; j < x.cols(); ++j) {
    double lo = x(0, j), hi = x(0, j);
    for (std::size_t i = 1; i < x.rows(); ++i) {
      lo = std::min(lo, x(i, j));
      hi = std::max(hi, x(i, j));
    }
    const double range = hi - lo;
    if (range <= 0.0) continue;
    for (std::size_t i = 0; i < x.rows(); ++i) out(i, j) = (x(i, j) - lo) / range;
  }
  return out;
}

PreparedData prepare(const MultiViewDataset& ds, const TrainConfig& cfg) {
  cfg.validate();
  ds.validate();
  PreparedData d;
  d.n = ds.n;
  d.clusters = resolve_clusters(ds, cfg);
  if (static_cast<std::size_t>(d.clusters) > ds.n) {
    throw ConfigError("clusters (" + std::to_string(d.clusters) + ") exceeds sample count " +
                      std::to_string(ds.n));
  }
  if (cfg.k_m >= ds.n) throw ConfigError("k_m must be smaller than the sample count");
  d.labels = ds.labels;
  const auto metrics = view_metrics(cfg.distance, ds.v());

  for (std::size_t v = 0; v < ds.v(); ++v) {
    const ViewData& view = ds.views[v];
    Matrix x = cfg.minmax_scale ? minmax_scale(*view.features) : *view.features;
    if (view.graph) {
      d.graphs.push_back(*view.graph);
      d.neighbors.push_back(snn_neighbors(*view.graph, cfg.k_m));
    } else {
      if (cfg.k_g >= ds.n) throw ConfigError("k_g must be smaller than the sample count");
      d.graphs.push_back(build_knn_graph(x, cfg.k_g, metrics[v]));
      d.neighbors.push_back(knn_neighbors(x, cfg.k_m, metrics[v]));
    }
    d.targets.push_back(binarize(d.graphs.back()));
    d.norm_adj.push_back(normalize_adjacency(d.graphs.back()));
    d.features.push_back(std::move(x));
  }
  return d;
}

std::size_t select_informative_view(const PreparedData& data, const TrainConfig& cfg) {
  require(data.v() >= 1, "select_informative_view: no views");
  if (data.v() == 1) return 0;
  const bool by_labels = cfg.select_by_labels && data.labels.has_value();
  std::size_t best = 0;
  double best_score = 0.0;
  for (std::size_t v = 0; v < data.v(); ++v) {
    // Same stream per view so identical graphs score identically.
    Rng rng = derive_rng(cfg.seed, kSelectionStream);
    const Matrix a = data.graphs[v].dense();
    const ClusterAssignment cut = spectral_cut(a, data.clusters, rng);
    const double score =
        by_labels ? -accuracy_hungarian(cut, *data.labels) : normalized_cut(a, cut);
    if (v == 0 || score < best_score) {
      best = v;
      best_score = score;
    }
  }
  return best;
}

SeedOutput run_seed(const PreparedData& data, const TrainConfig& cfg, std::size_t informative_view,
                    std::uint64_t seed) {
  require(informative_view < data.v(), "run_seed: informative view out of range");
  const auto start = std::chrono::steady_clock::now();
  SeedOutput out;
  out.run.seed = seed;
  const Ablation ablation = cfg.ablation;
  ClusterAssignment pred;

  if (ablation == Ablation::pgs) {
    Rng rng = derive_rng(seed, kSpectralStream);
    pred = spectral_cut(data.graphs[informative_view].dense(), data.clusters, rng);
  } else if (ablation == Ablation::cgg) {
    GfnTrainResult gfn = train_gfn(data.targets, gfn_options(cfg, data.clusters, seed));
    for (const GfnLossParts& p : gfn.history) out.run.gfn_loss.push_back(p.total);
    Rng rng = derive_rng(seed, kSpectralStream);
    pred = spectral_cut(gfn.graph.a_star, data.clusters, rng);
    out.consensus = std::move(gfn.graph.a_star);
  } else {
    MgaeTraining training{data, cfg, seed, uses_mim(ablation)};
    Matrix z;
    if (uses_gfn(ablation) && cfg.joint_mode) {
      Rng init = derive_rng(seed, 1);
      GfnTrainer trainer(data.targets, gfn_options(cfg, data.clusters, seed),
                         init_gfn_params(data.n, data.v(), cfg.gfn_depth, init));
      MgaeInputs inputs = make_mgae_inputs(data.features, data.norm_adj,
                                           normalize_adjacency(trainer.a_star()), data.targets,
                                           cfg.h1);
      z = training.train(inputs, &trainer, out.run.mgae_loss);
      for (const GfnLossParts& p : trainer.history()) out.run.gfn_loss.push_back(p.total);
      out.consensus = trainer.a_star();
    } else {
      Matrix consensus;
      if (uses_gfn(ablation)) {
        GfnTrainResult gfn = train_gfn(data.targets, gfn_options(cfg, data.clusters, seed));
        for (const GfnLossParts& p : gfn.history) out.run.gfn_loss.push_back(p.total);
        consensus = normalize_adjacency(gfn.graph.a_star);
        out.consensus = std::move(gfn.graph.a_star);
      } else {
        consensus = data.norm_adj[informative_view];
      }
      MgaeInputs inputs = make_mgae_inputs(data.features, data.norm_adj, std::move(consensus),
                                           data.targets, cfg.h1);
      z = training.train(inputs, nullptr, out.run.mgae_loss);
    }
    Rng rng = derive_rng(seed, kKMeansStream);
    pred = kmeans_best_of(z, data.clusters, rng, cfg.kmeans_restarts, cfg.kmeans_max_iter)
               .assignment;
    out.embedding = std::move(z);
  }

  out.run.labels = pred.labels;
  if (data.labels) out.run.metrics = evaluate(pred, *data.labels);
  out.run.wall_seconds = seconds_since(start);
  return out;
}

RunOutput run(const TrainConfig& cfg, const MultiViewDataset& ds) {
  const auto start = std::chrono::steady_clock::now();
  const PreparedData data = prepare(ds, cfg);
  RunOutput out;
  MetricsReport& r = out.report;
  r.config = cfg;
  r.n = data.n;
  r.v = data.v();
  r.clusters = data.clusters;
  r.informative_view = select_informative_view(data, cfg);
  for (std::size_t i = 0; i < cfg.runs; ++i) {
    SeedOutput seed_out = run_seed(data, cfg, r.informative_view, cfg.seed + i);
    r.runs.push_back(seed_out.run);
    if (i == 0) out.first = std::move(seed_out);
  }
  summarize(r);
  r.wall_seconds = seconds_since(start);
  return out;
}

}  // namespace cmgec
