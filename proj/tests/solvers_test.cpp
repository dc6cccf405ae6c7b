#include "tpt/solvers.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "tpt/analytic.hpp"

namespace {

using tpt::Bracket;
using tpt::FixedPointOptions;
using tpt::LiftedChain;
using tpt::SymmetricFamily2;
using tpt::TransitionTensor;

TEST(RootScanTest, IsolatesInteriorSignChanges) {
  auto cubic = [](double x) { return (x - 1.0 / 7.0) * (x - 1.0 / 3.0) * (x - 6.0 / 7.0); };
  tpt::RootSet rs = tpt::root_scan(cubic);
  ASSERT_EQ(rs.roots.size(), 3u);
  EXPECT_NEAR(rs.roots[0], 1.0 / 7.0, 1e-13);
  EXPECT_NEAR(rs.roots[1], 1.0 / 3.0, 1e-13);
  EXPECT_NEAR(rs.roots[2], 6.0 / 7.0, 1e-13);
  for (const Bracket& b : rs.brackets) {
    EXPECT_EQ(b.kind, Bracket::Kind::kSignChange);
    EXPECT_LT(b.lo, b.hi);
  }
}

TEST(RootScanTest, KeepsEndpointZeros) {
  tpt::RootSet rs = tpt::root_scan([](double x) { return x * (1.0 - x); });
  ASSERT_EQ(rs.roots.size(), 2u);
  EXPECT_DOUBLE_EQ(rs.roots[0], 0.0);
  EXPECT_DOUBLE_EQ(rs.roots[1], 1.0);
  EXPECT_EQ(rs.brackets[0].kind, Bracket::Kind::kEndpoint);
  EXPECT_EQ(rs.brackets[1].kind, Bracket::Kind::kEndpoint);
}

TEST(RootScanTest, PolishesTangentialRoots) {
  // Touches zero without a sign change; only the dip detector can see it.
  // The default tolerance keeps the candidate set tight around the exact
  // zero at the grid point x = 0.5 (a loose tolerance would admit a band of
  // near-zero samples wider than the duplicate-merge radius).
  tpt::RootSet rs = tpt::root_scan([](double x) { return (x - 0.5) * (x - 0.5); });
  ASSERT_EQ(rs.roots.size(), 1u);
  EXPECT_NEAR(rs.roots[0], 0.5, 1e-6);
  EXPECT_EQ(rs.brackets[0].kind, Bracket::Kind::kTangential);
}

TEST(RootScanTest, MergesDuplicatesAcrossDetectors) {
  // An exact zero on a grid point flanked by sign structure still yields a
  // single root.
  tpt::RootSet rs = tpt::root_scan([](double x) { return x - 0.5; });
  ASSERT_EQ(rs.roots.size(), 1u);
  EXPECT_NEAR(rs.roots[0], 0.5, 1e-12);
}

TEST(RootScanTest, FindsTheStationaryPointsOfAnExtremalFamily) {
  SymmetricFamily2 f(3, 1.0);
  tpt::RootSet rs =
      tpt::root_scan([&f](double x) { return tpt::stationary_defect(f, x); });
  ASSERT_EQ(rs.roots.size(), 2u);
  EXPECT_NEAR(rs.roots[0], 0.5, 1e-12);
  EXPECT_DOUBLE_EQ(rs.roots[1], 1.0);
  EXPECT_EQ(rs.brackets[1].kind, Bracket::Kind::kEndpoint);
}

TEST(RootScanTest, AgreesWithTheOracleScannerAcrossTheFamily) {
  for (int m : {3, 4, 5, 8}) {
    for (double a : {0.0, 0.2, 0.5, 0.85, 1.0}) {
      SymmetricFamily2 f(m, a);
      tpt::RootSet rs =
          tpt::root_scan([&f](double x) { return tpt::stationary_defect(f, x); });
      std::vector<double> expected = oracle::sign_scan_roots(
          [m, a](double x) { return oracle::defect(m, a, x); }, 100001, 1e-12);
      ASSERT_EQ(rs.roots.size(), expected.size()) << "m=" << m << " a=" << a;
      for (std::size_t i = 0; i < expected.size(); ++i) {
        EXPECT_NEAR(rs.roots[i], expected[i], 1e-8);
      }
    }
  }
}

TEST(RootScanTest, RejectsBadArgumentsAndNonFiniteValues) {
  auto ok = [](double x) { return x - 0.4; };
  EXPECT_THROW(tpt::root_scan(ok, 1000), std::invalid_argument);
  EXPECT_THROW(tpt::root_scan(ok, 100001, 0.0), std::invalid_argument);
  try {
    tpt::root_scan([](double x) {
      return x > 0.5 ? std::numeric_limits<double>::quiet_NaN() : 1.0;
    });
    FAIL() << "expected std::runtime_error";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("non-finite"), std::string::npos);
  }
}

TEST(FixedPointTest, CountsMapEvaluationsAndReportsThePreUpdateIterate) {
  // Balanced member: one step lands on the fixed point, one step confirms it.
  std::vector<double> x0{0.9, 0.1};
  tpt::IterationResult res = tpt::fixed_point_iterate(SymmetricFamily2(3, 0.5), x0);
  EXPECT_TRUE(res.converged);
  EXPECT_EQ(res.iterations, 2u);
  ASSERT_EQ(res.residual_history.size(), 2u);
  EXPECT_NEAR(res.residual_history[0], 0.4, 1e-15);
  EXPECT_DOUBLE_EQ(res.residual_history[1], 0.0);
  EXPECT_DOUBLE_EQ(res.iterate.coords[0], 0.5);
  EXPECT_DOUBLE_EQ(res.iterate.coords[1], 0.5);
  EXPECT_DOUBLE_EQ(res.rate_estimate, 0.0);
}

TEST(FixedPointTest, StartingOnAFixedPointConvergesInOneEvaluation) {
  std::vector<double> x0{1.0, 0.0};
  tpt::IterationResult res = tpt::fixed_point_iterate(SymmetricFamily2(3, 1.0), x0);
  EXPECT_TRUE(res.converged);
  EXPECT_EQ(res.iterations, 1u);
  EXPECT_DOUBLE_EQ(res.iterate.coords[0], 1.0);
  EXPECT_DOUBLE_EQ(res.iterate.residual, 0.0);
}

TEST(FixedPointTest, ReportsNonConvergenceOnAPeriodicMap) {
  auto flip = [](std::span<const double> v) { return std::vector<double>{v[1], v[0]}; };
  FixedPointOptions opts;
  opts.max_iterations = 50;
  std::vector<double> x0{0.3, 0.7};
  tpt::IterationResult res = tpt::fixed_point_iterate(flip, x0, opts);
  EXPECT_FALSE(res.converged);
  EXPECT_EQ(res.iterations, 50u);
  EXPECT_EQ(res.residual_history.size(), 50u);
  EXPECT_NEAR(res.residual_history.back(), 0.4, 1e-15);
  EXPECT_NEAR(res.rate_estimate, 1.0, 1e-12);
}

TEST(FixedPointTest, DampingBreaksTheOscillation) {
  auto flip = [](std::span<const double> v) { return std::vector<double>{v[1], v[0]}; };
  FixedPointOptions opts;
  opts.damping = 0.5;
  std::vector<double> x0{0.3, 0.7};
  tpt::IterationResult res = tpt::fixed_point_iterate(flip, x0, opts);
  EXPECT_TRUE(res.converged);
  EXPECT_EQ(res.iterations, 2u);
  EXPECT_DOUBLE_EQ(res.iterate.coords[0], 0.5);
}

TEST(FixedPointTest, ValidatesInputs) {
  auto identity = [](std::span<const double> v) {
    return std::vector<double>(v.begin(), v.end());
  };
  std::vector<double> not_normalized{0.5, 0.6};
  EXPECT_THROW(tpt::fixed_point_iterate(identity, not_normalized), std::invalid_argument);
  std::vector<double> negative{-0.1, 1.1};
  EXPECT_THROW(tpt::fixed_point_iterate(identity, negative), std::invalid_argument);

  std::vector<double> ok{0.5, 0.5};
  FixedPointOptions opts;
  opts.damping = 1.0;
  EXPECT_THROW(tpt::fixed_point_iterate(identity, ok, opts), std::invalid_argument);
  opts.damping = -0.1;
  EXPECT_THROW(tpt::fixed_point_iterate(identity, ok, opts), std::invalid_argument);
  opts = FixedPointOptions{};
  opts.max_iterations = 0;
  EXPECT_THROW(tpt::fixed_point_iterate(identity, ok, opts), std::invalid_argument);
  opts = FixedPointOptions{};
  opts.tol = 0.0;
  EXPECT_THROW(tpt::fixed_point_iterate(identity, ok, opts), std::invalid_argument);

  auto grows = [](std::span<const double>) { return std::vector<double>{1.0, 0.0, 0.0}; };
  EXPECT_THROW(tpt::fixed_point_iterate(grows, ok), std::runtime_error);
}

TEST(FixedPointTest, TensorAndFamilyOverloadsAgree) {
  SymmetricFamily2 f(4, 0.3);
  TransitionTensor t = f.materialize();
  std::vector<double> x0{0.25, 0.75};
  FixedPointOptions opts;
  opts.tol = 1e-12;
  tpt::IterationResult via_tensor = tpt::fixed_point_iterate(t, x0, opts);
  tpt::IterationResult via_family = tpt::fixed_point_iterate(f, x0, opts);
  EXPECT_TRUE(via_tensor.converged);
  EXPECT_TRUE(via_family.converged);
  EXPECT_NEAR(via_tensor.iterate.coords[0], via_family.iterate.coords[0], 1e-12);
  EXPECT_NEAR(via_tensor.iterate.coords[0], 0.5, 1e-10);
}

TEST(FixedPointTest, FamilyOverloadWorksFarBeyondTheTermSumLimit) {
  std::vector<double> x0{0.7, 0.3};
  tpt::IterationResult res = tpt::fixed_point_iterate(SymmetricFamily2(80, 0.3), x0);
  EXPECT_TRUE(res.converged);
  EXPECT_NEAR(res.iterate.coords[0], 0.5, 1e-10);

  std::vector<double> wrong_size{0.5, 0.25, 0.25};
  EXPECT_THROW(tpt::fixed_point_iterate(SymmetricFamily2(80, 0.3), wrong_size),
               std::invalid_argument);
}

TEST(FixedPointTest, QuadraticContractionNearTheUniformFixedPoint) {
  // The reduced map has zero derivative at 1/2, so the local rate collapses.
  std::vector<double> x0{0.9, 0.1};
  tpt::IterationResult res = tpt::fixed_point_iterate(SymmetricFamily2(3, 0.8), x0);
  EXPECT_TRUE(res.converged);
  EXPECT_NEAR(res.iterate.coords[0], 0.5, 1e-9);
  EXPECT_LT(res.rate_estimate, 0.5);
}

TEST(LiftedChainTest, WindowCodingAndSuccessors) {
  LiftedChain chain(SymmetricFamily2(3, 0.7));
  EXPECT_EQ(chain.order(), 3);
  EXPECT_EQ(chain.dim(), 2);
  EXPECT_EQ(chain.state_count(), 4u);
  // Window code 2 is (2, 1), newest symbol in the high digit.
  EXPECT_EQ(chain.successor(2, 1), 1u);
  EXPECT_EQ(chain.successor(2, 2), 3u);
  EXPECT_EQ(chain.successor(3, 1), 1u);
  EXPECT_EQ(chain.successor(0, 2), 2u);

  EXPECT_DOUBLE_EQ(chain.probability(0, 1), 0.7);
  EXPECT_DOUBLE_EQ(chain.probability(0, 2), 0.3);
  EXPECT_DOUBLE_EQ(chain.probability(2, 1), 0.3);
  EXPECT_DOUBLE_EQ(chain.probability(2, 2), 0.7);
}

TEST(LiftedChainTest, TensorAndFamilyConstructionsAgree) {
  SymmetricFamily2 f(4, 0.35);
  LiftedChain from_family(f);
  LiftedChain from_tensor(f.materialize());
  ASSERT_EQ(from_family.state_count(), from_tensor.state_count());
  for (std::size_t w = 0; w < from_family.state_count(); ++w) {
    for (int next = 1; next <= 2; ++next) {
      EXPECT_DOUBLE_EQ(from_family.probability(w, next), from_tensor.probability(w, next));
      EXPECT_EQ(from_family.successor(w, next), from_tensor.successor(w, next));
    }
  }
}

TEST(LiftedChainTest, MarginalSumsOverTheNewestSymbol) {
  LiftedChain chain(SymmetricFamily2(3, 0.7));
  std::vector<double> dist{0.1, 0.2, 0.3, 0.4};
  std::vector<double> m = chain.marginal(dist);
  ASSERT_EQ(m.size(), 2u);
  EXPECT_DOUBLE_EQ(m[0], 0.30000000000000004);
  EXPECT_DOUBLE_EQ(m[1], 0.7);
}

TEST(LiftedChainTest, DenseMatrixOfTheDeterministicExtremalMember) {
  LiftedChain chain(SymmetricFamily2(3, 1.0));
  auto matrix = chain.dense_matrix();
  std::vector<std::vector<double>> expected{
      {1, 0, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}, {0, 1, 0, 0}};
  EXPECT_EQ(matrix, expected);
}

TEST(LiftedChainTest, EnforcesTheStateSpaceCaps) {
  EXPECT_THROW(LiftedChain{SymmetricFamily2(22, 0.5)}, std::invalid_argument);
  LiftedChain big(SymmetricFamily2(14, 0.4));
  EXPECT_EQ(big.state_count(), std::size_t{1} << 13);
  EXPECT_THROW(big.dense_matrix(), std::invalid_argument);
  for (std::size_t w : {std::size_t{0}, std::size_t{511}, std::size_t{8191}}) {
    EXPECT_DOUBLE_EQ(big.probability(w, 1) + big.probability(w, 2), 1.0);
  }
}

TEST(MatrixStationaryTest, DoublyStochasticChainsKeepTheUniformWindowLaw) {
  tpt::LiftedStationary res = tpt::matrix_stationary(LiftedChain(SymmetricFamily2(3, 0.7)));
  EXPECT_TRUE(res.converged);
  EXPECT_EQ(res.iterations, 1u);
  EXPECT_TRUE(res.ergodic);
  for (double v : res.window_distribution) EXPECT_DOUBLE_EQ(v, 0.25);
  EXPECT_DOUBLE_EQ(res.marginal[0], 0.5);
  EXPECT_DOUBLE_EQ(res.marginal[1], 0.5);
}

TEST(MatrixStationaryTest, ExtremalMemberIsAFixedPointButNotErgodic) {
  tpt::LiftedStationary res = tpt::matrix_stationary(LiftedChain(SymmetricFamily2(3, 1.0)));
  EXPECT_TRUE(res.converged);
  EXPECT_EQ(res.iterations, 1u);
  EXPECT_FALSE(res.ergodic);
  for (double v : res.window_distribution) EXPECT_DOUBLE_EQ(v, 0.25);
  EXPECT_DOUBLE_EQ(res.marginal[0], 0.5);
}

TEST(MatrixStationaryTest, PeriodicChainTriggersTheAveragingFallback) {
  // 3 is absorbing, 1 and 2 trade mass forever, 0 drains into the cycle.
  TransitionTensor t(3, 2, std::vector<double>{0, 0, 1, 0, 1, 1, 0, 1});
  tpt::LiftedStationary res = tpt::matrix_stationary(LiftedChain(t));
  EXPECT_TRUE(res.converged);
  EXPECT_EQ(res.iterations, 102u);
  EXPECT_FALSE(res.ergodic);
  ASSERT_EQ(res.window_distribution.size(), 4u);
  EXPECT_NEAR(res.window_distribution[0], 0.0, 1e-12);
  EXPECT_NEAR(res.window_distribution[1], 0.375, 1e-9);
  EXPECT_NEAR(res.window_distribution[2], 0.375, 1e-9);
  EXPECT_NEAR(res.window_distribution[3], 0.25, 1e-9);
  EXPECT_NEAR(res.marginal[0], 0.375, 1e-9);
  EXPECT_NEAR(res.marginal[1], 0.625, 1e-9);
}

TEST(MatrixStationaryTest, ConnectedPeriodicChainIsNotErgodic) {
  // Deterministic 4-cycle 0 -> 2 -> 3 -> 1 -> 0: strongly connected, period 4.
  TransitionTensor t(3, 2, std::vector<double>{0, 1, 0, 1, 1, 0, 1, 0});
  tpt::LiftedStationary res = tpt::matrix_stationary(LiftedChain(t));
  EXPECT_TRUE(res.converged);
  EXPECT_FALSE(res.ergodic);
  for (double v : res.window_distribution) EXPECT_DOUBLE_EQ(v, 0.25);
}

TEST(MatrixStationaryTest, MatchesTheReducedFixedPointForTypicalMembers) {
  for (int m : {3, 4, 5, 9}) {
    for (double a : {0.15, 0.5, 0.9}) {
      SymmetricFamily2 f(m, a);
      tpt::LiftedStationary res = tpt::matrix_stationary(LiftedChain(f));
      EXPECT_TRUE(res.converged);
      EXPECT_TRUE(res.ergodic) << "m=" << m << " a=" << a;
      EXPECT_NEAR(res.marginal[0], 0.5, 1e-11);
    }
  }
}

}  // namespace
