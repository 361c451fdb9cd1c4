#include "cmgec/mgae.hpp"

#include <cmath>
#include <string>

#include "cmgec/errors.hpp"
#include "cmgec/losses.hpp"

namespace cmgec {

namespace {

struct EncoderView {
  const Matrix* features;
  const Matrix* norm_adj;
  const Matrix* propagated;  // null or empty when propagated on the fly
};

struct EncoderCache {
  Matrix weights;
  std::vector<Matrix> first_pre;  // Â X W1 before ReLU
  std::vector<Matrix> first_out;
  std::vector<Matrix> fusion_terms;  // Â Z1 W2
  Matrix fusion_pre;
  Matrix fusion_out;
  Matrix consensus_propagated;  // Â* Z2
  Matrix z;
};

bool has_propagated(const EncoderView& v) {
  return v.propagated != nullptr && !v.propagated->empty();
}

void check_encoder(std::span<const EncoderView> views, const Matrix& consensus,
                   const EncoderParams& p) {
  require(!views.empty(), "encode: at least one view required");
  require(views.size() == p.views(),
          "encode: " + std::to_string(views.size()) + " views for " + std::to_string(p.views()) +
              " parameter sets");
  const std::size_t n = consensus.rows();
  require(consensus.cols() == n, "encode: consensus adjacency must be square");
  for (std::size_t v = 0; v < views.size(); ++v) {
    const Matrix& x = *views[v].features;
    const Matrix& a = *views[v].norm_adj;
    require(x.rows() == n && a.rows() == n && a.cols() == n,
            "encode: view " + std::to_string(v) + " does not have " + std::to_string(n) +
                " nodes");
    require(x.cols() == p.first[v].value.rows(),
            "encode: view " + std::to_string(v) + " feature width mismatch");
  }
}

EncoderCache encoder_forward(std::span<const EncoderView> views, const Matrix& consensus,
                             const EncoderParams& p) {
  check_encoder(views, consensus, p);
  EncoderCache c;
  c.weights = softmax(p.view_attention.value);
  const std::size_t n = consensus.rows();
  c.fusion_pre = Matrix(n, p.output.value.rows());
  for (std::size_t v = 0; v < views.size(); ++v) {
    const EncoderView& view = views[v];
    Matrix pre = has_propagated(view) ? matmul(*view.propagated, p.first[v].value)
                                      : matmul(*view.norm_adj, matmul(*view.features, p.first[v].value));
    Matrix out = relu(pre);
    Matrix term = matmul(*view.norm_adj, matmul(out, p.second[v].value));
    c.fusion_pre.add_scaled(term, c.weights(v, 0));
    c.first_pre.push_back(std::move(pre));
    c.first_out.push_back(std::move(out));
    c.fusion_terms.push_back(std::move(term));
  }
  c.fusion_out = relu(c.fusion_pre);
  c.consensus_propagated = matmul(consensus, c.fusion_out);
  c.z = matmul(c.consensus_propagated, p.output.value);
  return c;
}

void encoder_backward(std::span<const EncoderView> views, const Matrix& consensus,
                      EncoderParams& p, const EncoderCache& c, const Matrix& grad_z) {
  p.output.grad += matmul_tn(c.consensus_propagated, grad_z);
  Matrix grad_fusion = matmul_tn(consensus, matmul_nt(grad_z, p.output.value));
  relu_backward_inplace(grad_fusion, c.fusion_pre);

  Matrix grad_weights(views.size(), 1);
  for (std::size_t v = 0; v < views.size(); ++v) {
    const EncoderView& view = views[v];
    grad_weights(v, 0) = dot(grad_fusion, c.fusion_terms[v]);
    // term = Â (Z1 W2); d(term) = α · grad_fusion
    Matrix grad_inner = matmul_tn(*view.norm_adj, grad_fusion);
    grad_inner *= c.weights(v, 0);
    p.second[v].grad += matmul_tn(c.first_out[v], grad_inner);
    Matrix grad_first = matmul_nt(grad_inner, p.second[v].value);
    relu_backward_inplace(grad_first, c.first_pre[v]);
    if (has_propagated(view)) {
      p.first[v].grad += matmul_tn(*view.propagated, grad_first);
    } else {
      p.first[v].grad += matmul_tn(*view.features, matmul_tn(*view.norm_adj, grad_first));
    }
  }
  p.view_attention.grad += softmax_backward(c.weights, grad_weights);
}

std::vector<EncoderView> views_of(const MgaeInputs& inputs) {
  require(inputs.view_norm_adj.size() == inputs.views() &&
              inputs.targets.size() == inputs.views(),
          "mgae: inputs disagree on the number of views");
  std::vector<EncoderView> out;
  for (std::size_t v = 0; v < inputs.views(); ++v) {
    out.push_back({&inputs.features[v], &inputs.view_norm_adj[v],
                   v < inputs.propagated.size() ? &inputs.propagated[v] : nullptr});
  }
  return out;
}

std::size_t nonzeros(const Matrix& m) {
  std::size_t count = 0;
  for (double x : m.values()) count += x != 0.0;
  return count;
}

}  // namespace

void EncoderParams::visit(const ParamVisitor& fn) {
  for (ParamTensor& w : first) fn(w);
  for (ParamTensor& w : second) fn(w);
  fn(view_attention);
  fn(output);
}

void DecoderParams::visit(const ParamVisitor& fn) {
  for (ParamTensor& w : weights) fn(w);
}

Matrix gcn_layer(const Matrix& norm_adj, const Matrix& h, const Matrix& w, Activation act) {
  require(norm_adj.rows() == norm_adj.cols() && norm_adj.cols() == h.rows(),
          "gcn_layer: adjacency does not match node count");
  require(h.cols() == w.rows(), "gcn_layer: weight input width mismatch");
  Matrix out = matmul(matmul(norm_adj, h), w);
  return act == Activation::relu ? relu(out) : out;
}

EncoderParams init_encoder(std::span<const std::size_t> input_dims, const EncoderSizes& sizes,
                           Rng& rng) {
  require(!input_dims.empty(), "init_encoder: at least one view required");
  require(sizes.h1 >= 1 && sizes.h2 >= 1 && sizes.m >= 1, "init_encoder: positive sizes required");
  EncoderParams p;
  for (std::size_t d : input_dims) {
    require(d >= 1, "init_encoder: view feature width must be positive");
    p.first.emplace_back(glorot_uniform(d, sizes.h1, rng));
  }
  for (std::size_t v = 0; v < input_dims.size(); ++v)
    p.second.emplace_back(glorot_uniform(sizes.h1, sizes.h2, rng));
  p.view_attention = ParamTensor(Matrix(input_dims.size(), 1));
  p.output = ParamTensor(glorot_uniform(sizes.h2, sizes.m, rng));
  return p;
}

DecoderParams init_decoders(std::size_t views, std::size_t m, Rng& rng) {
  DecoderParams p;
  for (std::size_t v = 0; v < views; ++v)
    p.weights.emplace_back(Matrix::identity(m) + uniform_matrix(m, m, -0.01, 0.01, rng));
  return p;
}

CommonRepresentation encode(std::span<const Matrix> features, std::span<const Matrix> view_norm_adj,
                            const Matrix& consensus_norm_adj, const EncoderParams& p) {
  require(features.size() == view_norm_adj.size(),
          "encode: features and graphs disagree on the number of views");
  std::vector<EncoderView> views;
  for (std::size_t v = 0; v < features.size(); ++v)
    views.push_back({&features[v], &view_norm_adj[v], nullptr});
  return {encoder_forward(views, consensus_norm_adj, p).z};
}

CommonRepresentation encode(const MgaeInputs& inputs, const EncoderParams& p) {
  const auto views = views_of(inputs);
  return {encoder_forward(views, inputs.consensus_norm_adj, p).z};
}

Matrix decode_view(const Matrix& z, const Matrix& w) {
  require(w.rows() == z.cols() && w.cols() == z.cols(), "decode_view: decoder must be m×m");
  return sigmoid(matmul_nt(matmul(z, w), z));
}

double reconstruction_loss(std::span<const Matrix> targets, std::span<const Matrix> decoded,
                           bool reweight) {
  require(targets.size() == decoded.size(), "reconstruction_loss: view count mismatch");
  double total = 0.0;
  for (std::size_t v = 0; v < targets.size(); ++v)
    total += link_bce(targets[v], decoded[v], {.reweight = reweight});
  return total;
}

double total_loss(double l_rec, double l_mim, double lambda2) { return l_rec + lambda2 * l_mim; }

MgaeInputs make_mgae_inputs(std::vector<Matrix> features, std::vector<Matrix> view_norm_adj,
                            Matrix consensus_norm_adj, std::vector<Matrix> targets,
                            std::size_t h1) {
  MgaeInputs in;
  in.features = std::move(features);
  in.view_norm_adj = std::move(view_norm_adj);
  in.consensus_norm_adj = std::move(consensus_norm_adj);
  in.targets = std::move(targets);
  in.propagated.resize(in.views());
  for (std::size_t v = 0; v < in.views(); ++v) {
    const Matrix& x = in.features[v];
    const Matrix& a = in.view_norm_adj[v];
    // Cost per epoch of (ÂX)·W1 versus Â·(X·W1), counting skipped zeros.
    Matrix propagated = matmul(a, x);
    const double cost_pre = static_cast<double>(nonzeros(propagated)) * static_cast<double>(h1);
    const double cost_fly = static_cast<double>(nonzeros(x) + nonzeros(a)) * static_cast<double>(h1);
    if (cost_pre <= cost_fly) in.propagated[v] = std::move(propagated);
  }
  return in;
}

MgaeLossParts mgae_loss_and_grad(EncoderParams& encoder, DecoderParams& decoders,
                                 DiscriminatorParams* discriminator, const MgaeInputs& inputs,
                                 const PairBatch* batch, double lambda2,
                                 bool update_discriminator) {
  require(lambda2 >= 0.0, "mgae: lambda2 must be nonnegative");
  require(decoders.weights.size() == inputs.views(), "mgae: one decoder per view required");
  const auto views = views_of(inputs);
  const EncoderCache cache = encoder_forward(views, inputs.consensus_norm_adj, encoder);
  const Matrix& z = cache.z;
  Matrix grad_z(z.rows(), z.cols());

  MgaeLossParts parts;
  Matrix grad_prob;
  for (std::size_t v = 0; v < inputs.views(); ++v) {
    ParamTensor& w = decoders.weights[v];
    const Matrix zw = matmul(z, w.value);
    const Matrix prob = sigmoid(matmul_nt(zw, z));
    parts.reconstruction += link_bce(inputs.targets[v], prob, {}, &grad_prob);
    // d/dlogit of sigmoid
    auto g = grad_prob.values();
    auto pv = prob.values();
    for (std::size_t i = 0; i < g.size(); ++i) g[i] *= pv[i] * (1.0 - pv[i]);
    const Matrix gz = matmul(grad_prob, z);  // dL·Z
    w.grad += matmul_tn(z, gz);
    grad_z += matmul_nt(gz, w.value);
    grad_z += matmul_tn(grad_prob, zw);
  }

  const bool with_mim = lambda2 > 0.0 && discriminator != nullptr && batch != nullptr &&
                        !batch->empty();
  if (with_mim) {
    parts.mim = mim_loss_and_grad(z, *batch, *discriminator, &grad_z, update_discriminator,
                                  lambda2);
  }
  parts.total = total_loss(parts.reconstruction, parts.mim, with_mim ? lambda2 : 0.0);
  encoder_backward(views, inputs.consensus_norm_adj, encoder, cache, grad_z);
  return parts;
}

}  // namespace cmgec
