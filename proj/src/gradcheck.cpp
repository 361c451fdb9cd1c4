#include "cmgec/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cmgec/errors.hpp"

namespace cmgec {

Matrix finite_diff_grad(const ScalarFn& f, const Matrix& x, double h) {
  require(h > 0.0, "finite_diff_grad: step must be positive");
  Matrix probe = x;
  Matrix grad(x.rows(), x.cols());
  auto pv = probe.values();
  auto gv = grad.values();
  for (std::size_t i = 0; i < pv.size(); ++i) {
    const double saved = pv[i];
    pv[i] = saved + h;
    const double up = f(probe);
    pv[i] = saved - h;
    const double down = f(probe);
    pv[i] = saved;
    if (!std::isfinite(up) || !std::isfinite(down)) {
      throw NumericalError("finite_diff_grad: non-finite function value at entry " +
                           std::to_string(i));
    }
    gv[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

double relative_error(const Matrix& a, const Matrix& b, double floor) {
  const double diff = frobenius_norm(a - b);
  const double scale = frobenius_norm(a) + frobenius_norm(b);
  if (scale < floor) return diff < floor ? 0.0 : diff / floor;
  return diff / scale;
}

}  // namespace cmgec
