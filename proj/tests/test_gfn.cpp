#include <gtest/gtest.h>

#include "cmgec/eigen.hpp"
#include "cmgec/errors.hpp"
#include "cmgec/gfn.hpp"
#include "gradient_cases.hpp"
#include "oracles.hpp"

using namespace cmgec;

namespace {

void expect_valid_consensus(const Matrix& a) {
  EXPECT_TRUE(is_symmetric(a, 0.0));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    EXPECT_EQ(a(i, i), 0.0);
    for (std::size_t j = 0; j < a.cols(); ++j) {
      EXPECT_GE(a(i, j), 0.0);
      EXPECT_LE(a(i, j), 1.0);
    }
  }
}

Matrix block_diagonal(std::size_t n, std::size_t split) {
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && (i < split) == (j < split)) a(i, j) = 1.0;
  return a;
}

double sum_smallest(const Matrix& a, std::size_t c) {
  const EigenResult e = sym_eig(laplacian(a));
  double s = 0.0;
  for (std::size_t k = 0; k < c; ++k) s += e.values[k];
  return s;
}

// Two noisy copies of a two-community graph.
std::vector<Matrix> community_views(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution in(0.6), out(0.08);
  std::vector<Matrix> views;
  for (int v = 0; v < 2; ++v) {
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if ((i < n / 2) == (j < n / 2) ? in(rng) : out(rng)) a(i, j) = a(j, i) = 1.0;
    views.push_back(a);
  }
  return views;
}

}  // namespace

TEST(GfnForward, ShapeAndConsensusInvariants) {
  std::mt19937_64 rng(1);
  const std::vector<Matrix> adjs{oracle::random_graph(4, 0.5, rng), oracle::random_graph(4, 0.5, rng)};
  Rng init(1);
  const ConsensusGraph cg = gfn_forward(adjs, init_gfn_params(4, 2, 2, init));
  EXPECT_EQ(cg.a_star.rows(), 4u);
  EXPECT_EQ(cg.a_star.cols(), 4u);
  expect_valid_consensus(cg.a_star);
  EXPECT_LT(max_abs_diff(cg.laplacian, laplacian(cg.a_star)), 1e-15);
}

TEST(GfnForward, InvariantsForArbitraryParams) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 3 + trial % 6;
    const std::vector<Matrix> adjs = gradcases::random_views(n, 1 + trial % 3, rng);
    Rng init(trial);
    GfnParams p = init_gfn_params(n, adjs.size(), 1 + trial % 3, init);
    const double scale = trial % 2 == 0 ? 1.0 : 50.0;
    p.visit([&](ParamTensor& t) { t.value = oracle::random_matrix(t.value.rows(), t.value.cols(), rng, -scale, scale); });
    expect_valid_consensus(gfn_forward(adjs, p).a_star);
  }
}

TEST(GfnForward, ViewOrderIrrelevantForIdenticalViews) {
  std::mt19937_64 rng(3);
  const Matrix a = oracle::random_graph(5, 0.5, rng);
  const std::vector<Matrix> adjs{a, a, a};
  Rng init(3);
  GfnParams p = init_gfn_params(5, 3, 2, init);
  p.first[1] = p.first[0];
  p.first[2] = p.first[0];
  p.fusion_attention.value = Matrix{{0.4}, {-1.0}, {2.0}};
  const Matrix base = gfn_forward(adjs, p).a_star;
  GfnParams rotated = p;
  rotated.fusion_attention.value = Matrix{{2.0}, {0.4}, {-1.0}};
  EXPECT_LT(max_abs_diff(gfn_forward(adjs, rotated).a_star, base), 1e-14);
}

TEST(GfnForward, SaturatedAttentionSelectsFirstView) {
  std::mt19937_64 rng(4);
  const std::vector<Matrix> adjs{oracle::random_graph(6, 0.5, rng), oracle::random_graph(6, 0.5, rng)};
  Rng init(4);
  GfnParams p = init_gfn_params(6, 2, 2, init);
  p.fusion_attention.value = Matrix{{10.0}, {-10.0}};
  GfnParams single;
  single.fusion_attention = ParamTensor(Matrix(1, 1));
  single.first = {p.first[0]};
  single.hidden = p.hidden;
  const Matrix one = gfn_forward(std::span<const Matrix>(adjs.data(), 1), single).a_star;
  EXPECT_LT(max_abs_diff(gfn_forward(adjs, p).a_star, one), 1e-3);
}

TEST(GfnForward, MismatchedViewsRejected) {
  Rng init(5);
  const GfnParams p = init_gfn_params(4, 2, 2, init);
  const std::vector<Matrix> bad{Matrix(4, 4), Matrix(5, 5)};
  EXPECT_THROW(gfn_forward(bad, p), ContractError);
  const std::vector<Matrix> one{Matrix(4, 4)};
  EXPECT_THROW(gfn_forward(one, p), ContractError);
}

TEST(GfnLoss, PerfectReconstruction) {
  std::mt19937_64 rng(6);
  const Matrix a = oracle::random_graph(7, 0.4, rng);
  ConsensusGraph cg;
  cg.a_star = a;
  cg.laplacian = laplacian(a);
  const std::vector<Matrix> adjs{a};
  EXPECT_LE(gfn_loss(cg, adjs, 0.0).reconstruction, 1e-5);
}

TEST(GfnLoss, BlockDiagonalTraceIsZero) {
  ConsensusGraph cg;
  cg.a_star = block_diagonal(6, 3);
  cg = recompute_indicator(cg, 2);
  const std::vector<Matrix> adjs{cg.a_star};
  EXPECT_NEAR(gfn_loss(cg, adjs, 1.0).trace, 0.0, 1e-8);
}

TEST(GfnLoss, K3TraceIsThree) {
  ConsensusGraph cg;
  cg.a_star = Matrix{{0, 1, 1}, {1, 0, 1}, {1, 1, 0}};
  cg = recompute_indicator(cg, 2);
  const std::vector<Matrix> adjs{cg.a_star};
  EXPECT_NEAR(gfn_loss(cg, adjs, 0.01).trace, 3.0, 1e-10);
}

TEST(GfnLoss, MissingIndicatorRejected) {
  ConsensusGraph cg;
  cg.a_star = Matrix(3, 3);
  const std::vector<Matrix> adjs{Matrix(3, 3)};
  EXPECT_THROW(gfn_loss(cg, adjs, 0.5), ContractError);
}

TEST(RecomputeIndicator, TwoComponentsConstantPerComponent) {
  ConsensusGraph cg;
  cg.a_star = block_diagonal(7, 3);
  cg = recompute_indicator(cg, 2);
  // Q·Qᵀ is rotation-invariant and equals the normalized component indicator projector.
  const Matrix proj = matmul_nt(cg.q, cg.q);
  for (std::size_t i = 0; i < 7; ++i)
    for (std::size_t j = 0; j < 7; ++j) {
      const bool same = (i < 3) == (j < 3);
      const double expected = same ? 1.0 / (i < 3 ? 3.0 : 4.0) : 0.0;
      EXPECT_NEAR(proj(i, j), expected, 1e-8);
    }
  EXPECT_NEAR(dot(cg.q, matmul(cg.laplacian, cg.q)), 0.0, 1e-8);
}

TEST(RecomputeIndicator, EmptyGraph) {
  ConsensusGraph cg;
  cg.a_star = Matrix(5, 5);
  cg = recompute_indicator(cg, 3);
  EXPECT_LT(max_abs_diff(matmul_tn(cg.q, cg.q), Matrix::identity(3)), 1e-6);
  EXPECT_NEAR(dot(cg.q, matmul(cg.laplacian, cg.q)), 0.0, 1e-12);
}

TEST(RecomputeIndicator, TraceEqualsSmallestEigenvalueSum) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 4 + trial % 8;
    Matrix a = oracle::random_matrix(n, n, rng, 0.0, 1.0);
    a = 0.5 * (a + transpose(a));
    for (std::size_t i = 0; i < n; ++i) a(i, i) = 0.0;
    ConsensusGraph cg;
    cg.a_star = a;
    for (std::size_t c : {1u, 2u, 3u}) {
      cg = recompute_indicator(cg, c);
      EXPECT_LT(max_abs_diff(matmul_tn(cg.q, cg.q), Matrix::identity(c)), 1e-6);
      const std::vector<Matrix> adjs{a};
      EXPECT_NEAR(gfn_loss(cg, adjs, 1.0).trace, sum_smallest(a, c), 1e-8);
    }
  }
}

TEST(GfnGradient, MatchesFiniteDifferences) {
  for (const auto& c : gradcases::gfn_cases(11)) EXPECT_LE(c.rel_error, 1e-4) << c.name;
}

TEST(TrainGfn, ReconstructionImprovesOnSingleView) {
  std::mt19937_64 rng(12);
  const std::vector<Matrix> adjs{oracle::random_graph(20, 0.2, rng)};
  GfnTrainOptions o;
  o.epochs = 50;
  o.lambda1 = 0.0;
  const GfnTrainResult r = train_gfn(adjs, o);
  ASSERT_EQ(r.history.size(), 50u);
  EXPECT_LT(gfn_loss(r.graph, adjs, 0.0).reconstruction, r.history.front().reconstruction);
  expect_valid_consensus(r.graph.a_star);
}

TEST(TrainGfn, DuplicatedViewDoublesLossTrajectory) {
  std::mt19937_64 rng(13);
  const Matrix a = oracle::random_graph(12, 0.3, rng);
  GfnTrainOptions o;
  o.epochs = 40;
  o.lambda1 = 0.0;
  Rng init(13);
  GfnParams one = init_gfn_params(12, 1, 2, init);
  GfnParams two = one;
  two.fusion_attention = ParamTensor(Matrix(2, 1));
  two.first.push_back(one.first[0]);

  const std::vector<Matrix> single{a}, doubled{a, a};
  const GfnTrainResult r1 = train_gfn(single, o, one);
  const GfnTrainResult r2 = train_gfn(doubled, o, two);
  for (std::size_t t = 0; t < o.epochs; ++t) {
    // Adam is invariant to gradient scale up to eps.
    EXPECT_NEAR(r2.history[t].reconstruction, 2.0 * r1.history[t].reconstruction,
                1e-6 * r1.history[t].reconstruction)
        << "epoch " << t;
  }
}

TEST(TrainGfn, SeedDeterminesResultBitwise) {
  const auto adjs = community_views(14, 14);
  GfnTrainOptions o;
  o.epochs = 15;
  o.seed = 99;
  EXPECT_EQ(train_gfn(adjs, o).graph.a_star, train_gfn(adjs, o).graph.a_star);
}

TEST(TrainGfn, StepperMatchesBatchTraining) {
  const auto adjs = community_views(10, 15);
  GfnTrainOptions o;
  o.epochs = 12;
  o.seed = 3;
  Rng init(7);
  const GfnParams p = init_gfn_params(10, 2, 2, init);
  GfnTrainer trainer(adjs, o, p);
  for (int i = 0; i < 12; ++i) trainer.step();
  EXPECT_EQ(trainer.a_star(), train_gfn(adjs, o, p).graph.a_star);
}

TEST(TrainGfn, LargerLambdaNeverIncreasesFinalTrace) {
  const auto adjs = community_views(20, 16);
  for (std::size_t warmup : {0, 30}) {
    double previous = std::numeric_limits<double>::infinity();
    for (double lambda1 : {0.0, 0.01, 1.0}) {
      GfnTrainOptions o;
      o.epochs = 100;
      o.lambda1 = lambda1;
      o.warmup = warmup;
      o.seed = 5;
      const GfnTrainResult r = train_gfn(adjs, o);
      const double trace = gfn_loss(r.graph, adjs, 1.0).trace;
      EXPECT_LE(trace, previous) << "lambda1=" << lambda1 << " warmup=" << warmup;
      previous = trace;
    }
  }
}

TEST(TrainGfn, WarmupTrainsReconstructionOnly) {
  const auto adjs = community_views(12, 17);
  Rng init(17);
  const GfnParams p = init_gfn_params(12, 2, 2, init);
  GfnTrainOptions plain;
  plain.epochs = 8;
  plain.lambda1 = 0.0;
  GfnTrainOptions warm = plain;
  warm.lambda1 = 0.5;
  warm.warmup = 8;
  GfnTrainer a(adjs, plain, p), b(adjs, warm, p);
  for (int i = 0; i < 8; ++i) {
    a.step();
    EXPECT_EQ(b.step().trace, 0.0);
  }
  EXPECT_EQ(a.a_star(), b.a_star());
  // The indicator is computed on the first step after the warm-up.
  EXPECT_GT(b.step().trace, 0.0);
  a.step();
  EXPECT_NE(a.a_star(), b.a_star());
}

TEST(TrainGfn, RejectsZeroEpochs) {
  GfnTrainOptions o;
  o.epochs = 0;
  const std::vector<Matrix> adjs{Matrix(3, 3)};
  EXPECT_THROW(train_gfn(adjs, o), ContractError);
}
