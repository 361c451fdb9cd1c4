#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cmgec/graphs.hpp"
#include "cmgec/matrix.hpp"
#include "cmgec/optim.hpp"

namespace cmgec {

struct NodePair {
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t view = 0;

  bool operator==(const NodePair&) const = default;
};

// positives[k] and negatives[k] share anchor node and originating view.
struct PairBatch {
  std::vector<NodePair> positives;
  std::vector<NodePair> negatives;

  bool empty() const { return positives.empty(); }
};

struct DiscriminatorParams {
  ParamTensor bilinear;  // m×m

  void visit(const ParamVisitor& fn) { fn(bilinear); }
};

DiscriminatorParams init_discriminator(std::size_t m, Rng& rng);

// One positive per (node, neighbor, view); each paired with a negative drawn
// uniformly from nodes outside {i} ∪ neighbors_v(i). Nodes whose view
// neighborhood covers every other node contribute no pairs from that view.
PairBatch sample_pairs(std::span<const NeighborList> neighbor_lists, Rng& rng);

double discriminator_score(const Matrix& z, std::size_t i, std::size_t j,
                           const DiscriminatorParams& p);

// −mean log ρ(pos) − mean log(1 − ρ(neg)), ρ clipped to [1e-7, 1−1e-7].
double mim_loss(const Matrix& z, const PairBatch& batch, const DiscriminatorParams& p);

// Same value; adds scale·gradient into grad_z (if non-null) and p.bilinear.grad
// (if update_discriminator).
double mim_loss_and_grad(const Matrix& z, const PairBatch& batch, DiscriminatorParams& p,
                         Matrix* grad_z, bool update_discriminator, double scale = 1.0);

}  // namespace cmgec
