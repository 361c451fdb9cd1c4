#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "cmgec/matrix.hpp"

namespace cmgec {

using Rng = std::mt19937_64;

// Learnable tensor with its gradient and Adam moments.
struct ParamTensor {
  Matrix value;
  Matrix grad;
  Matrix moment1;
  Matrix moment2;
  std::int64_t step_count = 0;

  ParamTensor() = default;
  explicit ParamTensor(Matrix initial)
      : value(std::move(initial)),
        grad(value.rows(), value.cols()),
        moment1(value.rows(), value.cols()),
        moment2(value.rows(), value.cols()) {}

  void zero_grad() { grad.fill(0.0); }
};

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// One bias-corrected Adam step. The gradient is left in place; callers zero it
// before the next accumulation.
void adam_update(ParamTensor& p, const AdamConfig& cfg);

// Visits every tensor of a parameter bundle; lets training loops step and zero
// parameters without knowing their layout.
using ParamVisitor = std::function<void(ParamTensor&)>;

// Uniform ±sqrt(6/(fan_in+fan_out)).
Matrix glorot_uniform(std::size_t rows, std::size_t cols, Rng& rng);
Matrix uniform_matrix(std::size_t rows, std::size_t cols, double lo, double hi, Rng& rng);

// Independent generator for a named purpose within one seeded run.
Rng derive_rng(std::uint64_t seed, std::uint64_t stream);

}  // namespace cmgec
