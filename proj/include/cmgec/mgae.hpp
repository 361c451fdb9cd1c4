#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cmgec/matrix.hpp"
#include "cmgec/mmim.hpp"
#include "cmgec/optim.hpp"

namespace cmgec {

enum class Activation { linear, relu };

// act(norm_adj · h · w)
Matrix gcn_layer(const Matrix& norm_adj, const Matrix& h, const Matrix& w, Activation act);

struct EncoderSizes {
  std::size_t h1 = 256;
  std::size_t h2 = 64;
  std::size_t m = 10;
};

struct EncoderParams {
  std::vector<ParamTensor> first;   // per view, d_v×h1
  std::vector<ParamTensor> second;  // per view, h1×h2
  ParamTensor view_attention;       // V×1 logits
  ParamTensor output;               // h2×m

  std::size_t views() const { return first.size(); }
  void visit(const ParamVisitor& fn);
};

struct DecoderParams {
  std::vector<ParamTensor> weights;  // per view, m×m

  void visit(const ParamVisitor& fn);
};

struct CommonRepresentation {
  Matrix z;  // N×m
};

EncoderParams init_encoder(std::span<const std::size_t> input_dims, const EncoderSizes& sizes,
                           Rng& rng);
// Identity plus uniform ±0.01 noise.
DecoderParams init_decoders(std::size_t views, std::size_t m, Rng& rng);

CommonRepresentation encode(std::span<const Matrix> features, std::span<const Matrix> view_norm_adj,
                            const Matrix& consensus_norm_adj, const EncoderParams& p);

// sigmoid(Z·W·Zᵀ)
Matrix decode_view(const Matrix& z, const Matrix& w);

// Σ_v link BCE(A^(v), Â^(v)).
double reconstruction_loss(std::span<const Matrix> targets, std::span<const Matrix> decoded,
                           bool reweight = true);

double total_loss(double l_rec, double l_mim, double lambda2);

// Inputs of one M-GAE training problem. Propagated features Â^(v)·X^(v) are
// precomputed when that is cheaper than propagating the first-layer product.
struct MgaeInputs {
  std::vector<Matrix> features;
  std::vector<Matrix> view_norm_adj;
  std::vector<Matrix> propagated;  // empty matrix for views propagated on the fly
  Matrix consensus_norm_adj;
  std::vector<Matrix> targets;

  std::size_t views() const { return features.size(); }
  std::size_t n() const { return consensus_norm_adj.rows(); }
};

MgaeInputs make_mgae_inputs(std::vector<Matrix> features, std::vector<Matrix> view_norm_adj,
                            Matrix consensus_norm_adj, std::vector<Matrix> targets,
                            std::size_t h1);

struct MgaeLossParts {
  double reconstruction = 0.0;
  double mim = 0.0;
  double total = 0.0;
};

// Forward and backward through encoder, decoders and (when lambda2 > 0 and a
// batch is given) the discriminator; gradients are added to the parameters.
// The discriminator gradient is only accumulated when update_discriminator.
MgaeLossParts mgae_loss_and_grad(EncoderParams& encoder, DecoderParams& decoders,
                                 DiscriminatorParams* discriminator, const MgaeInputs& inputs,
                                 const PairBatch* batch, double lambda2,
                                 bool update_discriminator = true);

CommonRepresentation encode(const MgaeInputs& inputs, const EncoderParams& p);

}  // namespace cmgec
