#include "cmgec/gfn.hpp"

#include <cmath>
#include <string>

#include "cmgec/eigen.hpp"
#include "cmgec/errors.hpp"
#include "cmgec/losses.hpp"

namespace cmgec {

namespace {

struct ForwardCache {
  Matrix weights;                  // softmax(fusion_attention)
  std::vector<Matrix> view_terms;  // W_v·A_v + b_v
  std::vector<Matrix> pre;         // pre-activation per layer
  std::vector<Matrix> post;        // activation per layer
  Matrix link_prob;                // sigmoid of the last layer, before symmetrization
  Matrix a_star;
};

void check_inputs(std::span<const Matrix> adjacencies, const GfnParams& params) {
  require(!adjacencies.empty(), "gfn: at least one view graph required");
  require(adjacencies.size() == params.views(),
          "gfn: " + std::to_string(adjacencies.size()) + " graphs for " +
              std::to_string(params.views()) + " view parameter sets");
  const std::size_t n = params.n();
  for (const Matrix& a : adjacencies) {
    require(a.rows() == n && a.cols() == n,
            "gfn: view graph has " + std::to_string(a.rows()) + " nodes, expected " +
                std::to_string(n));
  }
}

ForwardCache forward(std::span<const Matrix> adjacencies, const GfnParams& params) {
  check_inputs(adjacencies, params);
  const std::size_t n = params.n();
  const std::size_t depth = params.depth();
  ForwardCache cache;
  cache.weights = softmax(params.fusion_attention.value);

  Matrix fused(n, n);
  for (std::size_t v = 0; v < params.views(); ++v) {
    Matrix term = matmul(params.first[v].weight.value, adjacencies[v]);
    add_column_broadcast(term, params.first[v].bias.value);
    fused.add_scaled(term, cache.weights(v, 0));
    cache.view_terms.push_back(std::move(term));
  }
  cache.pre.push_back(std::move(fused));
  cache.post.push_back(depth > 1 ? relu(cache.pre.back()) : cache.pre.back());

  for (std::size_t l = 0; l < params.hidden.size(); ++l) {
    Matrix pre = matmul(params.hidden[l].weight.value, cache.post.back());
    add_column_broadcast(pre, params.hidden[l].bias.value);
    const bool last = l + 2 == depth;
    cache.post.push_back(last ? pre : relu(pre));
    cache.pre.push_back(std::move(pre));
  }

  cache.link_prob = sigmoid(cache.post.back());
  cache.a_star = Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) cache.a_star(i, j) = 0.5 * (cache.link_prob(i, j) + cache.link_prob(j, i));
  return cache;
}

// Loss value; when grad_a is given it receives d(loss)/d(A*) over off-diagonal entries.
GfnLossParts loss_on_graph(const Matrix& a_star, std::span<const Matrix> adjacencies,
                           const Matrix& q, double lambda1, Matrix* grad_a) {
  require(lambda1 >= 0.0, "gfn_loss: lambda1 must be nonnegative");
  const std::size_t n = a_star.rows();
  GfnLossParts parts;
  if (grad_a != nullptr) *grad_a = Matrix(n, n);
  Matrix grad_view;
  for (const Matrix& a : adjacencies) {
    parts.reconstruction += link_bce(a, a_star, {}, grad_a != nullptr ? &grad_view : nullptr);
    if (grad_a != nullptr) *grad_a += grad_view;
  }
  if (lambda1 > 0.0) {
    require(q.rows() == n && q.cols() >= 1,
            "gfn_loss: relaxed indicator missing; call recompute_indicator first");
    const Matrix lq = matmul(laplacian(a_star), q);
    parts.trace = dot(q, lq);
    if (grad_a != nullptr) {
      // d tr(QᵀLQ) / dA_ij = ‖q_i‖² − q_i·q_j for i ≠ j.
      const Matrix gram = matmul_nt(q, q);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (i != j) (*grad_a)(i, j) += lambda1 * (gram(i, i) - gram(i, j));
    }
  } else if (q.rows() == n && q.cols() >= 1) {
    parts.trace = dot(q, matmul(laplacian(a_star), q));
  }
  parts.total = parts.reconstruction + lambda1 * parts.trace;
  return parts;
}

void backward(GfnParams& params, std::span<const Matrix> adjacencies, const ForwardCache& cache,
              const Matrix& grad_a) {
  const std::size_t n = params.n();
  // A* = (M + Mᵀ)/2 off the diagonal, M = sigmoid(G_L).
  Matrix grad(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double g = 0.5 * (grad_a(i, j) + grad_a(j, i));
      const double m = cache.link_prob(i, j);
      grad(i, j) = g * m * (1.0 - m);
    }
  }

  for (std::size_t l = params.hidden.size(); l-- > 0;) {
    GfnLayer& layer = params.hidden[l];
    const Matrix& input = cache.post[l];
    layer.weight.grad += matmul_nt(grad, input);
    layer.bias.grad += row_sums(grad);
    grad = matmul_tn(layer.weight.value, grad);
    relu_backward_inplace(grad, cache.pre[l]);
  }

  Matrix grad_weights(params.views(), 1);
  for (std::size_t v = 0; v < params.views(); ++v) {
    const double alpha = cache.weights(v, 0);
    params.first[v].weight.grad.add_scaled(matmul_nt(grad, adjacencies[v]), alpha);
    params.first[v].bias.grad.add_scaled(row_sums(grad), alpha);
    grad_weights(v, 0) = dot(grad, cache.view_terms[v]);
  }
  params.fusion_attention.grad += softmax_backward(cache.weights, grad_weights);
}

}  // namespace

void GfnParams::visit(const ParamVisitor& fn) {
  fn(fusion_attention);
  for (GfnLayer& layer : first) {
    fn(layer.weight);
    fn(layer.bias);
  }
  for (GfnLayer& layer : hidden) {
    fn(layer.weight);
    fn(layer.bias);
  }
}

GfnParams init_gfn_params(std::size_t n, std::size_t views, std::size_t depth, Rng& rng) {
  require(n >= 1 && views >= 1 && depth >= 1, "init_gfn_params: positive sizes required");
  GfnParams p;
  p.fusion_attention = ParamTensor(Matrix(views, 1));
  for (std::size_t v = 0; v < views; ++v)
    p.first.push_back({ParamTensor(glorot_uniform(n, n, rng)), ParamTensor(Matrix(n, 1))});
  for (std::size_t l = 1; l < depth; ++l)
    p.hidden.push_back({ParamTensor(glorot_uniform(n, n, rng)), ParamTensor(Matrix(n, 1))});
  return p;
}

ConsensusGraph gfn_forward(std::span<const Matrix> adjacencies, const GfnParams& params) {
  ForwardCache cache = forward(adjacencies, params);
  ConsensusGraph cg;
  cg.laplacian = laplacian(cache.a_star);
  cg.a_star = std::move(cache.a_star);
  return cg;
}

ConsensusGraph gfn_forward(std::span<const ViewGraph> graphs, const GfnParams& params) {
  std::vector<Matrix> dense;
  dense.reserve(graphs.size());
  for (const ViewGraph& g : graphs) dense.push_back(g.dense());
  return gfn_forward(std::span<const Matrix>(dense), params);
}

GfnLossParts gfn_loss(const ConsensusGraph& cg, std::span<const Matrix> adjacencies,
                      double lambda1) {
  for (const Matrix& a : adjacencies)
    require(a.same_shape(cg.a_star), "gfn_loss: view graph and A* differ in size");
  return loss_on_graph(cg.a_star, adjacencies, cg.q, lambda1, nullptr);
}

GfnLossParts gfn_loss_and_grad(GfnParams& params, std::span<const Matrix> adjacencies,
                               const Matrix& q, double lambda1) {
  const ForwardCache cache = forward(adjacencies, params);
  Matrix grad_a;
  const GfnLossParts parts = loss_on_graph(cache.a_star, adjacencies, q, lambda1, &grad_a);
  backward(params, adjacencies, cache, grad_a);
  return parts;
}

ConsensusGraph recompute_indicator(ConsensusGraph cg, std::size_t c) {
  require(c >= 1 && c <= cg.a_star.rows(), "recompute_indicator: cluster count out of range");
  cg.laplacian = laplacian(cg.a_star);
  cg.q = sym_eig(cg.laplacian, c).vectors;
  cg.c = c;
  return cg;
}

GfnTrainResult train_gfn(std::span<const Matrix> adjacencies, const GfnTrainOptions& options) {
  require(!adjacencies.empty(), "train_gfn: at least one view graph required");
  Rng rng = derive_rng(options.seed, 1);
  return train_gfn(adjacencies, options,
                   init_gfn_params(adjacencies.front().rows(), adjacencies.size(), options.depth,
                                   rng));
}

GfnTrainResult train_gfn(std::span<const Matrix> adjacencies, const GfnTrainOptions& options,
                         GfnParams initial) {
  GfnTrainer trainer(std::vector<Matrix>(adjacencies.begin(), adjacencies.end()), options,
                     std::move(initial));
  while (trainer.epoch() < options.epochs) trainer.step();
  return std::move(trainer).finish();
}

GfnTrainer::GfnTrainer(std::vector<Matrix> adjacencies, GfnTrainOptions options,
                       GfnParams initial)
    : adjacencies_(std::move(adjacencies)), options_(options), params_(std::move(initial)) {
  require(options_.epochs >= 1, "train_gfn: epochs must be at least 1");
  require(options_.q_refresh >= 1, "train_gfn: q_refresh must be at least 1");
  check_inputs(adjacencies_, params_);
  history_.reserve(options_.epochs);
}

GfnLossParts GfnTrainer::step() {
  const bool spectral = options_.lambda1 > 0.0 && epoch_ >= options_.warmup;
  if (spectral && (epoch_ - options_.warmup) % options_.q_refresh == 0) {
    q_ = recompute_indicator(gfn_forward(adjacencies_, params_), options_.clusters).q;
  }
  params_.visit([](ParamTensor& p) { p.zero_grad(); });
  const GfnLossParts parts =
      gfn_loss_and_grad(params_, adjacencies_, q_, spectral ? options_.lambda1 : 0.0);
  if (!std::isfinite(parts.total)) {
    throw NumericalError("train_gfn: loss became non-finite at epoch " + std::to_string(epoch_));
  }
  history_.push_back(parts);
  params_.visit([&](ParamTensor& p) { adam_update(p, options_.adam); });
  ++epoch_;
  return parts;
}

ConsensusGraph GfnTrainer::current() const {
  return recompute_indicator(gfn_forward(adjacencies_, params_), options_.clusters);
}

Matrix GfnTrainer::a_star() const { return gfn_forward(adjacencies_, params_).a_star; }

GfnTrainResult GfnTrainer::finish() && {
  GfnTrainResult result;
  result.graph = current();
  result.history = std::move(history_);
  result.params = std::move(params_);
  return result;
}

}  // namespace cmgec
