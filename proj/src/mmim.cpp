#include "cmgec/mmim.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cmgec/errors.hpp"
#include "cmgec/losses.hpp"

namespace cmgec {

namespace {

double bilinear_form(const Matrix& z, std::size_t i, std::size_t j, const Matrix& b) {
  const std::size_t m = z.cols();
  double s = 0.0;
  for (std::size_t a = 0; a < m; ++a) {
    const double zi = z(i, a);
    if (zi == 0.0) continue;
    double inner = 0.0;
    for (std::size_t c = 0; c < m; ++c) inner += b(a, c) * z(j, c);
    s += zi * inner;
  }
  return s;
}

void check_shapes(const Matrix& z, const PairBatch& batch, const DiscriminatorParams& p) {
  require(!batch.positives.empty() && !batch.negatives.empty(), "mim_loss: empty pair batch");
  require(p.bilinear.value.rows() == z.cols() && p.bilinear.value.cols() == z.cols(),
          "mim_loss: discriminator shape does not match representation width");
  auto in_range = [&](const NodePair& pr) { return pr.i < z.rows() && pr.j < z.rows(); };
  require(std::all_of(batch.positives.begin(), batch.positives.end(), in_range) &&
              std::all_of(batch.negatives.begin(), batch.negatives.end(), in_range),
          "mim_loss: pair node id out of range");
}

}  // namespace

DiscriminatorParams init_discriminator(std::size_t m, Rng& rng) {
  return {ParamTensor(glorot_uniform(m, m, rng))};
}

PairBatch sample_pairs(std::span<const NeighborList> neighbor_lists, Rng& rng) {
  PairBatch batch;
  std::vector<char> excluded;
  std::vector<std::size_t> pool;
  for (std::size_t v = 0; v < neighbor_lists.size(); ++v) {
    const NeighborList& list = neighbor_lists[v];
    const std::size_t n = list.n();
    excluded.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& nbrs = list.per_node[i];
      if (nbrs.empty()) continue;
      excluded[i] = 1;
      for (const Neighbor& nb : nbrs) {
        require(nb.id < n && nb.id != i, "sample_pairs: invalid neighbor id");
        excluded[nb.id] = 1;
      }
      pool.clear();
      for (std::size_t j = 0; j < n; ++j)
        if (!excluded[j]) pool.push_back(j);
      excluded[i] = 0;
      for (const Neighbor& nb : nbrs) excluded[nb.id] = 0;
      if (pool.empty()) continue;

      std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
      for (const Neighbor& nb : nbrs) {
        batch.positives.push_back({i, nb.id, v});
        batch.negatives.push_back({i, pool[pick(rng)], v});
      }
    }
  }
  return batch;
}

double discriminator_score(const Matrix& z, std::size_t i, std::size_t j,
                           const DiscriminatorParams& p) {
  require(i < z.rows() && j < z.rows(), "discriminator_score: node id out of range");
  require(p.bilinear.value.rows() == z.cols() && p.bilinear.value.cols() == z.cols(),
          "discriminator_score: discriminator shape does not match representation width");
  return sigmoid(bilinear_form(z, i, j, p.bilinear.value));
}

double mim_loss(const Matrix& z, const PairBatch& batch, const DiscriminatorParams& p) {
  check_shapes(z, batch, p);
  const Matrix& b = p.bilinear.value;
  double pos = 0.0;
  for (const NodePair& pr : batch.positives)
    pos += std::log(clip_probability(sigmoid(bilinear_form(z, pr.i, pr.j, b))));
  double neg = 0.0;
  for (const NodePair& pr : batch.negatives)
    neg += std::log(1.0 - clip_probability(sigmoid(bilinear_form(z, pr.i, pr.j, b))));
  return -pos / static_cast<double>(batch.positives.size()) -
         neg / static_cast<double>(batch.negatives.size());
}

double mim_loss_and_grad(const Matrix& z, const PairBatch& batch, DiscriminatorParams& p,
                         Matrix* grad_z, bool update_discriminator, double scale) {
  check_shapes(z, batch, p);
  if (grad_z != nullptr) require(grad_z->same_shape(z), "mim_loss_and_grad: grad_z shape");
  const Matrix& b = p.bilinear.value;
  const std::size_t m = z.cols();
  std::vector<double> bz_j(m), bt_z_i(m);

  auto accumulate = [&](const NodePair& pr, double dscore) {
    // score = z_i · B · z_jᵀ
    for (std::size_t a = 0; a < m; ++a) {
      double s1 = 0.0, s2 = 0.0;
      for (std::size_t c = 0; c < m; ++c) {
        s1 += b(a, c) * z(pr.j, c);
        s2 += b(c, a) * z(pr.i, c);
      }
      bz_j[a] = s1;
      bt_z_i[a] = s2;
    }
    if (grad_z != nullptr) {
      for (std::size_t a = 0; a < m; ++a) {
        (*grad_z)(pr.i, a) += dscore * bz_j[a];
        (*grad_z)(pr.j, a) += dscore * bt_z_i[a];
      }
    }
    if (update_discriminator) {
      for (std::size_t a = 0; a < m; ++a) {
        const double zi = z(pr.i, a) * dscore;
        if (zi == 0.0) continue;
        for (std::size_t c = 0; c < m; ++c) p.bilinear.grad(a, c) += zi * z(pr.j, c);
      }
    }
  };

  const double np = static_cast<double>(batch.positives.size());
  const double nn = static_cast<double>(batch.negatives.size());
  double pos = 0.0;
  for (const NodePair& pr : batch.positives) {
    const double rho = sigmoid(bilinear_form(z, pr.i, pr.j, b));
    pos += std::log(clip_probability(rho));
    if (rho > kProbClip && rho < 1.0 - kProbClip) accumulate(pr, -scale * (1.0 - rho) / np);
  }
  double neg = 0.0;
  for (const NodePair& pr : batch.negatives) {
    const double rho = sigmoid(bilinear_form(z, pr.i, pr.j, b));
    neg += std::log(1.0 - clip_probability(rho));
    if (rho > kProbClip && rho < 1.0 - kProbClip) accumulate(pr, scale * rho / nn);
  }
  return -pos / np - neg / nn;
}

}  // namespace cmgec
