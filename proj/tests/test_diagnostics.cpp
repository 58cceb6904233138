#include <gtest/gtest.h>

#include <cmath>

#include "thoma_rsk/diagnostics.hpp"
#include "thoma_rsk/lemmas.hpp"
#include "thoma_rsk/stats.hpp"

using namespace thoma;

namespace {
Word xs(std::initializer_list<int> idx) {
  Word w;
  for (int i : idx) w.push_back(Letter::row(static_cast<std::uint32_t>(i)));
  return w;
}
const Letter X1 = Letter::row(1), X2 = Letter::row(2), X3 = Letter::row(3);
}  // namespace

TEST(Walk, NeverMovesRightWithoutQ1) {
  const WalkConfig c = WalkConfig::make(0.0, 0.5);
  RngStream r = SeededGenerator(1).stream(Experiment::Walk, 0);
  for (std::int64_t n : {0, 1, 10, 1000}) EXPECT_EQ(walk_position(c, n, r), 0);
}

TEST(Walk, OneStep) {
  const WalkConfig c = WalkConfig::make(0.2, 0.5);
  const SeededGenerator g(2);
  std::size_t ones = 0;
  const std::size_t T = 100000;
  for (std::size_t t = 0; t < T; ++t) {
    RngStream r = g.stream(Experiment::Walk, t);
    std::int64_t pos = walk_position(c, 1, r);
    ASSERT_TRUE(pos == 0 || pos == 1);
    ones += static_cast<std::size_t>(pos);
  }
  const double f = static_cast<double>(ones) / T;
  EXPECT_NEAR(f, 0.2, 4.0 * std::sqrt(0.2 * 0.8 / T));
}

TEST(Walk, SimulatedMeanStaysBelowTheBound) {
  const WalkConfig c = WalkConfig::make(0.2, 0.5);
  const SeededGenerator g(3);
  const std::size_t T = 20000;
  auto pos = run_trials<std::int64_t>(T, default_workers(), [&](std::size_t t) {
    RngStream r = g.stream(Experiment::Walk, t);
    return walk_position(c, 10000, r);
  });
  double sum = 0.0;
  for (auto p : pos) sum += static_cast<double>(p);
  EXPECT_LE(sum / T, c.expectation_bound());
  EXPECT_NEAR(c.expectation_bound(), 20.0 / 9.0, 1e-15);
}

TEST(Walk, ExactExpectation) {
  const WalkConfig c = WalkConfig::make(0.2, 0.5);
  EXPECT_EQ(walk_expectation_exact(c, 0), 0.0);
  EXPECT_NEAR(walk_expectation_exact(c, 1), 0.2, 1e-15);
  // from 0 (mass 0.8): up with 0.2; from 1 (mass 0.2): to 2, 1, 0 with 0.2, 0.3, 0.5
  EXPECT_NEAR(walk_expectation_exact(c, 2), 0.8 * 0.2 + 0.2 * (0.2 * 2 + 0.3), 1e-15);
  auto s = walk_expectation_series(c, 1000);
  for (std::size_t k = 1; k < s.size(); ++k) EXPECT_GE(s[k], s[k - 1]);
  EXPECT_LE(s.back(), 2.2223);
}

TEST(Walk, StationaryMeanIsTheLimit) {
  // stationary law is geometric with ratio q = q1/q3, mean q/(1−q)
  const WalkConfig c = WalkConfig::make(0.2, 0.5);
  EXPECT_NEAR(walk_expectation_exact(c, 5000), 0.4 / 0.6, 1e-10);
}

TEST(Walk, BoundHoldsOnTheGrid) {
  for (auto [q1, q3] : {std::pair{0.2, 0.5}, std::pair{0.3, 0.4}, std::pair{0.1, 0.8}}) {
    CheckResult r = check_walk_bound(q1, q3, 1000);
    EXPECT_TRUE(r.passed) << r.detail;
  }
}

TEST(Walk, RejectsBadProbabilities) {
  EXPECT_THROW(WalkConfig::make(0.5, 0.5), std::invalid_argument);
  EXPECT_THROW(WalkConfig::make(0.6, 0.7), std::invalid_argument);
  EXPECT_THROW(WalkConfig::make(-0.1, 0.5), std::invalid_argument);
}

TEST(Restrict, WorkedExample) {
  EXPECT_EQ(restrict_word(example_restriction_word(), X2, X3), xs({2, 3, 2, 2, 3, 3, 2, 3, 3, 2}));
  EXPECT_TRUE(restrict_word(xs({1, 1, 1}), X2, X3).empty());
  EXPECT_EQ(restrict_word(xs({2, 3, 2}), X2, X3), xs({2, 3, 2}));
}

TEST(Rho, Examples) {
  EXPECT_EQ(rho(xs({2, 3, 2, 2, 3, 3, 2, 3, 3, 2}), X2, X3), 2);
  // the maximal suffix is the last six letters
  EXPECT_EQ(rho(xs({3, 2, 3, 3, 2}), X2, X3), 1);
  EXPECT_EQ(rho(xs({3, 2, 3, 3, 2, 3}), X2, X3), 2);
  EXPECT_EQ(rho(xs({2, 2, 2}), X2, X3), 0);
  EXPECT_EQ(rho(xs({3, 3, 3, 3}), X2, X3), 4);
  EXPECT_THROW(rho(xs({1}), X2, X3), std::invalid_argument);
}

TEST(PossibleTransformation, WorkedExample) {
  EXPECT_EQ(possible_transformation(example_restriction_word(), X2, X3, LinearOrder::standard(3, 0)),
            xs({2, 3, 2, 3, 2, 3, 2, 2, 3, 3}));
}

TEST(PossibleTransformation, TwoLetters) {
  EXPECT_EQ(possible_transformation(xs({1, 2}), X1, X2, LinearOrder::standard(2, 0)), xs({1, 2}));
}

TEST(PossibleTransformation, RequiresAdjacentLeLetters) {
  const LinearOrder o = LinearOrder::standard(3, 1);
  EXPECT_THROW(possible_transformation(xs({1}), X1, X3, o), std::invalid_argument);
  EXPECT_THROW(possible_transformation(xs({1}), X2, X1, o), std::invalid_argument);
  EXPECT_THROW(possible_transformation(xs({1}), X3, Letter::col(1), o), std::invalid_argument);
}

TEST(PossibleTransformation, ResultNeverIncreases) {
  CheckResult e = check_transformation_exhaustive(7);
  EXPECT_TRUE(e.passed) << e.detail;
  CheckResult r = check_transformation_random(10000, 40, SeededGenerator(12), default_workers());
  EXPECT_TRUE(r.passed) << r.detail;
}

TEST(PossibleTransformation, ResultMatchesFirstRowCount) {
  CheckResult r = check_rho_first_row(12);
  EXPECT_TRUE(r.passed) << r.detail;
}

TEST(ConditionalCovariance, AcceptancePoint) {
  Matrix c = conditional_covariance(ThomaParams::make({0.4, 0.25}, {0.2}, 0.15), 2, 1);
  const double want[3][3] = {{0.24, -0.1, -0.08}, {-0.1, 0.1875, -0.05}, {-0.08, -0.05, 0.16}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(c(i, j), want[i][j], 1e-15);
}

TEST(ConditionalCovariance, DegenerateParams) {
  Matrix c = conditional_covariance(ThomaParams::make({1.0}, {}, 0.0), 1, 0);
  EXPECT_EQ(c(0, 0), 0.0);
  EXPECT_THROW(conditional_covariance(ThomaParams::make({1.0}, {}, 0.0), 2, 0), std::invalid_argument);
}

TEST(ConditionalCovariance, MatchesConditionedGaussians) {
  // draw independent Gaussians and project onto the zero-sum hyperplane
  const ThomaParams p = ThomaParams::make({0.4, 0.25}, {0.2}, 0.15);
  const std::vector<double> var{0.4, 0.25, 0.2, 0.15};
  const std::size_t T = 1000000;
  const SeededGenerator g(21);
  auto draws = run_trials<std::array<double, 3>>(T, default_workers(), [&](std::size_t t) {
    RngStream r = g.stream(Experiment::ConditionalGaussian, t);
    double z[4], s = 0.0;
    for (int k = 0; k < 4; ++k) {
      z[k] = std::sqrt(var[k]) * r.normal();
      s += z[k];
    }
    std::array<double, 3> out;
    for (int k = 0; k < 3; ++k) out[k] = z[k] - var[k] * s;
    return out;
  });
  Matrix c = conditional_covariance(p, 2, 1);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double m = 0.0, m2 = 0.0;
      for (const auto& d : draws) {
        const double v = d[i] * d[j];
        m += v;
        m2 += v * v;
      }
      m /= T;
      const double se = std::sqrt((m2 / T - m * m) / T);
      EXPECT_NEAR(m, c(i, j), 3.0 * se) << i << "," << j;
    }
}

TEST(ConditionalCovariance, EqualsTheLimitCovariance) {
  for (const auto& p : standard_test_matrix()) {
    CheckResult r = check_conditional_identity(p);
    EXPECT_TRUE(r.passed) << r.detail;
  }
}
