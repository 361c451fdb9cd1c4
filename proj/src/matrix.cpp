#include "cmgec/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cmgec/errors.hpp"

namespace cmgec {

namespace {

std::string shape_str(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  if (!a.same_shape(b)) {
    throw ContractError(std::string(op) + ": shape mismatch " + shape_str(a) + " vs " +
                        shape_str(b));
  }
}

// c += a·b for row-major buffers; i-k-j order keeps the inner loop contiguous.
void gemm_accumulate(const double* a, const double* b, double* c, std::size_t n,
                     std::size_t inner, std::size_t m) {
  for (std::size_t i = 0; i < n; ++i) {
    double* c_row = c + i * m;
    const double* a_row = a + i * inner;
    for (std::size_t k = 0; k < inner; ++k) {
      const double aik = a_row[k];
      if (aik == 0.0) continue;
      const double* b_row = b + k * m;
      for (std::size_t j = 0; j < m; ++j) c_row[j] += aik * b_row[j];
    }
  }
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw ContractError("Matrix: data length " + std::to_string(data_.size()) +
                        " does not match " + std::to_string(rows) + "x" + std::to_string(cols));
  }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw ContractError("Matrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> diag) {
  Matrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

void Matrix::fill(double value) { std::fill(data_.begin(), data_.end(), value); }

Matrix& Matrix::operator+=(const Matrix& other) {
  require_same_shape(*this, other, "operator+=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
  require_same_shape(*this, other, "operator-=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

Matrix& Matrix::operator*=(double scalar) {
  for (double& x : data_) x *= scalar;
  return *this;
}

Matrix& Matrix::add_scaled(const Matrix& other, double scalar) {
  require_same_shape(*this, other, "add_scaled");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += scalar * other.data_[i];
  return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(Matrix a, double scalar) { return a *= scalar; }
Matrix operator*(double scalar, Matrix a) { return a *= scalar; }

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw ContractError("matmul: inner dimension mismatch " + shape_str(a) + " · " + shape_str(b));
  }
  Matrix c(a.rows(), b.cols());
  gemm_accumulate(a.data(), b.data(), c.data(), a.rows(), a.cols(), b.cols());
  return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) {
    throw ContractError("matmul_tn: row mismatch " + shape_str(a) + " vs " + shape_str(b));
  }
  Matrix c(a.cols(), b.cols());
  const std::size_t m = b.cols();
  for (std::size_t k = 0; k < a.rows(); ++k) {
    const double* a_row = a.data() + k * a.cols();
    const double* b_row = b.data() + k * m;
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const double aki = a_row[i];
      if (aki == 0.0) continue;
      double* c_row = c.data() + i * m;
      for (std::size_t j = 0; j < m; ++j) c_row[j] += aki * b_row[j];
    }
  }
  return c;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) {
    throw ContractError("matmul_nt: column mismatch " + shape_str(a) + " vs " + shape_str(b));
  }
  return matmul(a, transpose(b));
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "hadamard");
  Matrix c = a;
  auto cv = c.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < cv.size(); ++i) cv[i] *= bv[i];
  return c;
}

double dot(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "dot");
  double s = 0.0;
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < av.size(); ++i) s += av[i] * bv[i];
  return s;
}

double sum(const Matrix& a) {
  double s = 0.0;
  for (double x : a.values()) s += x;
  return s;
}

double frobenius_norm(const Matrix& a) { return std::sqrt(dot(a, a)); }

double max_abs_diff(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < av.size(); ++i) m = std::max(m, std::abs(av[i] - bv[i]));
  return m;
}

bool all_finite(const Matrix& a) {
  return std::all_of(a.values().begin(), a.values().end(),
                     [](double x) { return std::isfinite(x); });
}

bool is_symmetric(const Matrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j)
      if (std::abs(a(i, j) - a(j, i)) > tol) return false;
  return true;
}

Matrix row_sums(const Matrix& a) {
  Matrix s(a.rows(), 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double acc = 0.0;
    for (double x : a.row(i)) acc += x;
    s(i, 0) = acc;
  }
  return s;
}

void add_column_broadcast(Matrix& a, const Matrix& column) {
  if (column.rows() != a.rows() || column.cols() != 1) {
    throw ContractError("add_column_broadcast: expected " + std::to_string(a.rows()) +
                        "x1 column, got " + shape_str(column));
  }
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double b = column(i, 0);
    for (double& x : a.row(i)) x += b;
  }
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Matrix sigmoid(const Matrix& a) {
  Matrix out = a;
  for (double& x : out.values()) x = sigmoid(x);
  return out;
}

Matrix relu(const Matrix& a) {
  Matrix out = a;
  for (double& x : out.values()) x = x > 0.0 ? x : 0.0;
  return out;
}

void relu_backward_inplace(Matrix& grad, const Matrix& pre_activation) {
  require_same_shape(grad, pre_activation, "relu_backward");
  auto g = grad.values();
  auto p = pre_activation.values();
  for (std::size_t i = 0; i < g.size(); ++i)
    if (!(p[i] > 0.0)) g[i] = 0.0;
}

Matrix softmax(const Matrix& logits) {
  require(logits.cols() == 1 && logits.rows() >= 1, "softmax: expected non-empty column vector");
  double hi = logits(0, 0);
  for (double x : logits.values()) hi = std::max(hi, x);
  Matrix w(logits.rows(), 1);
  double total = 0.0;
  for (std::size_t i = 0; i < logits.rows(); ++i) {
    w(i, 0) = std::exp(logits(i, 0) - hi);
    total += w(i, 0);
  }
  w *= 1.0 / total;
  return w;
}

Matrix softmax_backward(const Matrix& weights, const Matrix& grad_weights) {
  require_same_shape(weights, grad_weights, "softmax_backward");
  const double mean = dot(weights, grad_weights);
  Matrix g(weights.rows(), 1);
  for (std::size_t i = 0; i < weights.rows(); ++i)
    g(i, 0) = weights(i, 0) * (grad_weights(i, 0) - mean);
  return g;
}

}  // namespace cmgec
