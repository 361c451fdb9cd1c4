#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace cmgec {

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> diag);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  void fill(double value);
  bool same_shape(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(double scalar);
  // this += scalar * other
  Matrix& add_scaled(const Matrix& other, double scalar);

  bool operator==(const Matrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(Matrix a, double scalar);
Matrix operator*(double scalar, Matrix a);

Matrix matmul(const Matrix& a, const Matrix& b);
// aᵀ·b
Matrix matmul_tn(const Matrix& a, const Matrix& b);
// a·bᵀ
Matrix matmul_nt(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);
Matrix hadamard(const Matrix& a, const Matrix& b);

// Frobenius inner product.
double dot(const Matrix& a, const Matrix& b);
double sum(const Matrix& a);
double frobenius_norm(const Matrix& a);
double max_abs_diff(const Matrix& a, const Matrix& b);
bool all_finite(const Matrix& a);
bool is_symmetric(const Matrix& a, double tol);

Matrix row_sums(const Matrix& a);  // rows×1
void add_column_broadcast(Matrix& a, const Matrix& column);  // a(:,j) += column for all j

double sigmoid(double x);
Matrix sigmoid(const Matrix& a);
Matrix relu(const Matrix& a);
// Zero entries of grad where pre-activation was not positive.
void relu_backward_inplace(Matrix& grad, const Matrix& pre_activation);

// Numerically stable softmax over a column vector (n×1).
Matrix softmax(const Matrix& logits);
// Gradient w.r.t. logits given weights = softmax(logits) and d(loss)/d(weights).
Matrix softmax_backward(const Matrix& weights, const Matrix& grad_weights);

}  // namespace cmgec
