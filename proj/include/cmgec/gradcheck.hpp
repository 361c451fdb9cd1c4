#pragma once

#include <functional>

#include "cmgec/matrix.hpp"

namespace cmgec {

using ScalarFn = std::function<double(const Matrix&)>;

// Central-difference gradient (f(x+h·e) − f(x−h·e)) / 2h for every entry of x.
// Throws NumericalError if f is non-finite at a probe point.
Matrix finite_diff_grad(const ScalarFn& f, const Matrix& x, double h = 1e-5);

// ‖a − b‖ / max(‖a‖ + ‖b‖, floor); zero when both are below floor.
double relative_error(const Matrix& a, const Matrix& b, double floor = 1e-12);

}  // namespace cmgec
