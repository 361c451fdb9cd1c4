#pragma once

#include <cstddef>
#include <vector>

#include "cmgec/matrix.hpp"

namespace cmgec {

struct EigenResult {
  std::vector<double> values;  // ascending
  Matrix vectors;              // n×k, column i pairs with values[i]
};

// Smallest k eigenpairs of a symmetric matrix via Householder tridiagonalization
// followed by implicit QL iteration. Throws ContractError when m is not
// symmetric within 1e-8 (scaled by max(1, max|m|)) or k is out of [1, n], and
// NumericalError if QL fails to converge.
EigenResult sym_eig(const Matrix& m, std::size_t k);

inline EigenResult sym_eig(const Matrix& m) { return sym_eig(m, m.rows()); }

}  // namespace cmgec
