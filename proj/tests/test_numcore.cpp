#include <gtest/gtest.h>

#include <cmath>

#include "cmgec/eigen.hpp"
#include "cmgec/errors.hpp"
#include "cmgec/gradcheck.hpp"
#include "cmgec/losses.hpp"
#include "cmgec/matrix.hpp"
#include "cmgec/optim.hpp"
#include "cmgec/sparse.hpp"
#include "oracles.hpp"

using namespace cmgec;

namespace {

Matrix reconstruct(const EigenResult& e) {
  const std::size_t n = e.vectors.rows();
  Matrix out(n, n);
  for (std::size_t k = 0; k < e.values.size(); ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out(i, j) += e.values[k] * e.vectors(i, k) * e.vectors(j, k);
  return out;
}

Matrix random_symmetric(std::size_t n, std::mt19937_64& rng) {
  Matrix a = oracle::random_matrix(n, n, rng);
  return 0.5 * (a + transpose(a));
}

}  // namespace

TEST(Matrix, ProductsMatchNaiveOracle) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = oracle::random_matrix(1 + trial % 5, 3 + trial % 4, rng);
    const Matrix b = oracle::random_matrix(a.cols(), 2 + trial % 3, rng);
    EXPECT_LT(max_abs_diff(matmul(a, b), oracle::naive_matmul(a, b)), 1e-13);
    const Matrix c = oracle::random_matrix(a.rows(), 4, rng);
    EXPECT_LT(max_abs_diff(matmul_tn(a, c), oracle::naive_matmul(transpose(a), c)), 1e-13);
    EXPECT_LT(max_abs_diff(matmul_nt(a, transpose(b)), oracle::naive_matmul(a, b)), 1e-13);
  }
}

TEST(Matrix, ShapeMismatchIsContractError) {
  EXPECT_THROW(matmul(Matrix(2, 3), Matrix(2, 3)), ContractError);
  EXPECT_THROW(dot(Matrix(2, 3), Matrix(3, 2)), ContractError);
}

TEST(Matrix, SoftmaxSumsToOne) {
  const Matrix w = softmax(Matrix{{1000.0}, {-1000.0}, {0.0}});
  EXPECT_TRUE(all_finite(w));
  EXPECT_NEAR(sum(w), 1.0, 1e-15);
  EXPECT_NEAR(w(0, 0), 1.0, 1e-15);
}

TEST(SymEig, DiagonalMatrix) {
  const std::vector<double> diag{3.0, 1.0, 2.0};
  const EigenResult e = sym_eig(Matrix::diagonal(diag), 3);
  ASSERT_EQ(e.values.size(), 3u);
  EXPECT_NEAR(e.values[0], 1.0, 1e-12);
  EXPECT_NEAR(e.values[1], 2.0, 1e-12);
  EXPECT_NEAR(e.values[2], 3.0, 1e-12);
}

TEST(SymEig, IdentityTwoSmallest) {
  const EigenResult e = sym_eig(Matrix::identity(4), 2);
  ASSERT_EQ(e.values.size(), 2u);
  EXPECT_NEAR(e.values[0], 1.0, 1e-12);
  EXPECT_NEAR(e.values[1], 1.0, 1e-12);
  EXPECT_EQ(e.vectors.rows(), 4u);
  EXPECT_EQ(e.vectors.cols(), 2u);
}

TEST(SymEig, SwapMatrixMatchesCharacteristicPolynomial) {
  // λ² − 1 = 0
  const EigenResult e = sym_eig(Matrix{{0.0, 1.0}, {1.0, 0.0}}, 2);
  EXPECT_NEAR(e.values[0], -1.0, 1e-12);
  EXPECT_NEAR(e.values[1], 1.0, 1e-12);
}

TEST(SymEig, RejectsAsymmetricAndBadK) {
  EXPECT_THROW(sym_eig(Matrix{{0.0, 1.0}, {0.5, 0.0}}, 2), ContractError);
  EXPECT_THROW(sym_eig(Matrix::identity(3), 0), ContractError);
  EXPECT_THROW(sym_eig(Matrix::identity(3), 4), ContractError);
}

TEST(SymEig, PropertiesOnRandomSymmetric) {
  std::mt19937_64 rng(7);
  for (std::size_t n = 1; n <= 12; ++n) {
    const Matrix m = random_symmetric(n, rng);
    const EigenResult e = sym_eig(m);
    EXPECT_LT(frobenius_norm(reconstruct(e) - m), 1e-6) << "n=" << n;
    const Matrix gram = matmul_tn(e.vectors, e.vectors);
    EXPECT_LT(max_abs_diff(gram, Matrix::identity(n)), 1e-6);
    for (std::size_t k = 0; k < n; ++k) {
      if (k > 0) {
        EXPECT_LE(e.values[k - 1], e.values[k]);
      }
      Matrix v(n, 1);
      for (std::size_t i = 0; i < n; ++i) v(i, 0) = e.vectors(i, k);
      EXPECT_LT(max_abs_diff(matmul(m, v), e.values[k] * v), 1e-6);
    }
  }
}

TEST(SymEig, PartialMatchesFull) {
  std::mt19937_64 rng(8);
  const Matrix m = random_symmetric(9, rng);
  const EigenResult full = sym_eig(m);
  const EigenResult part = sym_eig(m, 3);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(part.values[k], full.values[k], 1e-12);
}

TEST(Adam, ZeroGradientLeavesValue) {
  ParamTensor p(Matrix{{1.5, -2.0}});
  adam_update(p, {});
  EXPECT_EQ(p.value, (Matrix{{1.5, -2.0}}));
  EXPECT_EQ(p.step_count, 1);
}

TEST(Adam, FirstStepScalarHandOracle) {
  ParamTensor p(Matrix{{1.0}});
  p.grad(0, 0) = 1.0;
  AdamConfig cfg;
  cfg.lr = 0.01;
  adam_update(p, cfg);
  // m̂ = g, v̂ = g², step = lr·g/(|g| + eps)
  const double expected = 1.0 - 0.01 * 1.0 / (1.0 + 1e-8);
  EXPECT_NEAR(p.value(0, 0), expected, 1e-15);
  EXPECT_NEAR(p.value(0, 0), 0.99, 1e-9);
}

TEST(Adam, SecondStepScalarHandOracle) {
  ParamTensor p(Matrix{{0.0}});
  AdamConfig cfg;
  double m = 0, v = 0, x = 0;
  const double grads[] = {0.5, -2.0, 1.0};
  for (int t = 1; t <= 3; ++t) {
    const double g = grads[t - 1];
    p.grad(0, 0) = g;
    adam_update(p, cfg);
    m = 0.9 * m + 0.1 * g;
    v = 0.999 * v + 0.001 * g * g;
    const double mh = m / (1 - std::pow(0.9, t)), vh = v / (1 - std::pow(0.999, t));
    x -= cfg.lr * mh / (std::sqrt(vh) + cfg.eps);
    EXPECT_NEAR(p.value(0, 0), x, 1e-15);
  }
}

TEST(Adam, IdenticalInputsBitwiseIdentical) {
  std::mt19937_64 rng(3);
  const Matrix init = oracle::random_matrix(3, 4, rng);
  const Matrix grad = oracle::random_matrix(3, 4, rng);
  ParamTensor a(init), b(init);
  for (int i = 0; i < 5; ++i) {
    a.grad = grad;
    b.grad = grad;
    adam_update(a, {});
    adam_update(b, {});
  }
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.moment2, b.moment2);
}

TEST(Adam, RejectsBadConfigAndShapes) {
  ParamTensor p(Matrix(2, 2));
  AdamConfig bad;
  bad.lr = 0.0;
  EXPECT_THROW(adam_update(p, bad), ContractError);
  bad = {};
  bad.beta1 = 1.0;
  EXPECT_THROW(adam_update(p, bad), ContractError);
  p.grad = Matrix(3, 2);
  EXPECT_THROW(adam_update(p, {}), ContractError);
}

TEST(FiniteDiff, Quadratic) {
  const Matrix g = finite_diff_grad([](const Matrix& x) { return dot(x, x); }, Matrix{{3.0}});
  EXPECT_NEAR(g(0, 0), 6.0, 1e-4);
}

TEST(FiniteDiff, ConstantIsZero) {
  const Matrix g = finite_diff_grad([](const Matrix&) { return 4.2; }, Matrix(2, 3, 1.0));
  EXPECT_EQ(g, Matrix(2, 3));
}

TEST(FiniteDiff, SigmoidAtZero) {
  const Matrix g =
      finite_diff_grad([](const Matrix& x) { return sum(sigmoid(x)); }, Matrix{{0.0}});
  EXPECT_NEAR(g(0, 0), 0.25, 1e-8);
}

TEST(FiniteDiff, NonFiniteIsNumericalError) {
  EXPECT_THROW(finite_diff_grad([](const Matrix& x) { return std::log(x(0, 0)); }, Matrix{{0.0}}),
               NumericalError);
}

TEST(SparseAdjacency, DenseRoundTrip) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    Matrix a = oracle::random_graph(7, 0.4, rng);
    std::uniform_real_distribution<double> w(0.1, 3.0);
    for (std::size_t i = 0; i < 7; ++i)
      for (std::size_t j = i + 1; j < 7; ++j)
        if (a(i, j) != 0.0) a(i, j) = a(j, i) = w(rng);
    const SparseAdjacency s = SparseAdjacency::from_dense(a);
    EXPECT_EQ(s.to_dense(), a);
    EXPECT_EQ(SparseAdjacency::from_dense(s.to_dense()), s);
  }
}

TEST(SparseAdjacency, SymmetricAndValidated) {
  const SparseAdjacency s = SparseAdjacency::from_edges(3, {{0, 1, 2.0}, {2, 1, 1.0}});
  EXPECT_EQ(s.nonzeros(), 4u);
  EXPECT_TRUE(is_symmetric(s.to_dense(), 0.0));
  EXPECT_THROW(SparseAdjacency::from_edges(3, {{0, 3, 1.0}}), ContractError);
  EXPECT_THROW(SparseAdjacency::from_edges(3, {{0, 1, -1.0}}), ContractError);
  EXPECT_THROW(SparseAdjacency::from_edges(3, {{0, 1, 1.0}, {1, 0, 2.0}}), ContractError);
  EXPECT_THROW(SparseAdjacency::from_dense(Matrix{{0.0, 1.0}, {0.0, 0.0}}), ContractError);
}

TEST(LinkBce, UniformHalfIsLn2) {
  Matrix target(4, 4);
  target(0, 1) = target(1, 0) = 1.0;
  LinkBceOptions opts;
  opts.reweight = false;
  EXPECT_NEAR(link_bce(target, Matrix(4, 4, 0.5), opts), std::log(2.0), 1e-15);
}

TEST(LinkBce, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(5);
  const Matrix target = oracle::random_graph(6, 0.4, rng);
  const Matrix prob = oracle::random_matrix(6, 6, rng, 0.05, 0.95);
  for (bool reweight : {false, true}) {
    LinkBceOptions opts;
    opts.reweight = reweight;
    Matrix grad;
    link_bce(target, prob, opts, &grad);
    const Matrix fd =
        finite_diff_grad([&](const Matrix& p) { return link_bce(target, p, opts); }, prob);
    EXPECT_LT(relative_error(grad, fd), 1e-6);
  }
}
