#include "cmgec/optim.hpp"

#include <cmath>

#include "cmgec/errors.hpp"

namespace cmgec {

void adam_update(ParamTensor& p, const AdamConfig& cfg) {
  require(cfg.lr > 0.0, "adam_update: lr must be positive");
  require(cfg.beta1 >= 0.0 && cfg.beta1 < 1.0, "adam_update: beta1 outside [0,1)");
  require(cfg.beta2 >= 0.0 && cfg.beta2 < 1.0, "adam_update: beta2 outside [0,1)");
  require(cfg.eps > 0.0, "adam_update: eps must be positive");
  require(p.value.same_shape(p.grad) && p.value.same_shape(p.moment1) &&
              p.value.same_shape(p.moment2),
          "adam_update: value/grad/moment shape mismatch");

  ++p.step_count;
  const double t = static_cast<double>(p.step_count);
  const double correction1 = 1.0 - std::pow(cfg.beta1, t);
  const double correction2 = 1.0 - std::pow(cfg.beta2, t);

  auto value = p.value.values();
  auto grad = p.grad.values();
  auto m1 = p.moment1.values();
  auto m2 = p.moment2.values();
  for (std::size_t i = 0; i < value.size(); ++i) {
    const double g = grad[i];
    m1[i] = cfg.beta1 * m1[i] + (1.0 - cfg.beta1) * g;
    m2[i] = cfg.beta2 * m2[i] + (1.0 - cfg.beta2) * g * g;
    const double m_hat = m1[i] / correction1;
    const double v_hat = m2[i] / correction2;
    value[i] -= cfg.lr * m_hat / (std::sqrt(v_hat) + cfg.eps);
  }
}

Matrix uniform_matrix(std::size_t rows, std::size_t cols, double lo, double hi, Rng& rng) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Matrix m(rows, cols);
  for (double& x : m.values()) x = dist(rng);
  return m;
}

Matrix glorot_uniform(std::size_t rows, std::size_t cols, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
  return uniform_matrix(rows, cols, -limit, limit, rng);
}

Rng derive_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    0x636d6765u};
  return Rng(seq);
}

}  // namespace cmgec
