#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cmgec/graphs.hpp"
#include "cmgec/matrix.hpp"
#include "cmgec/optim.hpp"

namespace cmgec {

// Dense affine map applied to an N×N graph matrix column by column:
// W (N×N) · G + b·1ᵀ.
struct GfnLayer {
  ParamTensor weight;
  ParamTensor bias;  // N×1
};

struct GfnParams {
  ParamTensor fusion_attention;  // V×1 logits, softmax gives the view weights
  std::vector<GfnLayer> first;   // one per view, fused by attention
  std::vector<GfnLayer> hidden;  // layers 2..L

  std::size_t views() const { return first.size(); }
  std::size_t n() const { return first.empty() ? 0 : first.front().weight.value.rows(); }
  std::size_t depth() const { return 1 + hidden.size(); }
  void visit(const ParamVisitor& fn);
};

GfnParams init_gfn_params(std::size_t n, std::size_t views, std::size_t depth, Rng& rng);

struct ConsensusGraph {
  Matrix a_star;     // symmetric, entries in [0,1], zero diagonal
  Matrix laplacian;  // D − A*
  Matrix q;          // N×c relaxed indicator; empty until recompute_indicator
  std::size_t c = 0;
};

ConsensusGraph gfn_forward(std::span<const Matrix> adjacencies, const GfnParams& params);
ConsensusGraph gfn_forward(std::span<const ViewGraph> graphs, const GfnParams& params);

struct GfnLossParts {
  double reconstruction = 0.0;  // Σ_v BCE(A^(v), A*)
  double trace = 0.0;           // tr(Qᵀ L Q)
  double total = 0.0;
};

// Requires cg.q to hold the indicator when lambda1 > 0.
GfnLossParts gfn_loss(const ConsensusGraph& cg, std::span<const Matrix> adjacencies,
                      double lambda1);

// Loss at the current parameters with q held constant; gradients are added to
// every tensor of params.
GfnLossParts gfn_loss_and_grad(GfnParams& params, std::span<const Matrix> adjacencies,
                               const Matrix& q, double lambda1);

// Fills q with the eigenvectors of the c smallest eigenvalues of L_{A*}.
ConsensusGraph recompute_indicator(ConsensusGraph cg, std::size_t c);

struct GfnTrainOptions {
  std::size_t epochs = 200;
  std::size_t q_refresh = 5;
  std::size_t clusters = 2;
  std::size_t depth = 2;
  double lambda1 = 0.01;
  // Epochs of reconstruction-only training before the trace term switches on.
  std::size_t warmup = 0;
  AdamConfig adam;
  std::uint64_t seed = 0;
};

struct GfnTrainResult {
  ConsensusGraph graph;
  std::vector<GfnLossParts> history;  // loss before each update
  GfnParams params;
};

// Epoch-at-a-time training so GFN updates can be interleaved with other models.
class GfnTrainer {
 public:
  GfnTrainer(std::vector<Matrix> adjacencies, GfnTrainOptions options, GfnParams initial);

  // One Adam step; refreshes the indicator first when the refresh period is due.
  // The period is counted from the end of the warm-up.
  GfnLossParts step();
  std::size_t epoch() const { return epoch_; }
  // A* at the current parameters, with the indicator for options.clusters.
  ConsensusGraph current() const;
  Matrix a_star() const;
  const std::vector<GfnLossParts>& history() const { return history_; }
  GfnTrainResult finish() &&;

 private:
  std::vector<Matrix> adjacencies_;
  GfnTrainOptions options_;
  GfnParams params_;
  Matrix q_;
  std::size_t epoch_ = 0;
  std::vector<GfnLossParts> history_;
};

GfnTrainResult train_gfn(std::span<const Matrix> adjacencies, const GfnTrainOptions& options);
GfnTrainResult train_gfn(std::span<const Matrix> adjacencies, const GfnTrainOptions& options,
                         GfnParams initial);

}  // namespace cmgec
