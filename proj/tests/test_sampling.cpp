#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "thoma_rsk/parallel.hpp"
#include "thoma_rsk/sampling.hpp"
#include "thoma_rsk/stats.hpp"

using namespace thoma;

namespace {
const Letter X1 = Letter::row(1), Y1 = Letter::col(1), Y2 = Letter::col(2);

std::vector<double> sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v;
}
}  // namespace

TEST(Streams, SameKeySameStream) {
  SeededGenerator g(42);
  RngStream a = g.stream(Experiment::Clt, 7), b = g.stream(Experiment::Clt, 7);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
}

TEST(Streams, DifferentKeysDiffer) {
  SeededGenerator g(42);
  EXPECT_NE(g.stream(Experiment::Clt, 7)(), g.stream(Experiment::Clt, 8)());
  EXPECT_NE(g.stream(Experiment::Clt, 7)(), g.stream(Experiment::Drift, 7)());
  EXPECT_NE(g.stream(Experiment::Clt, 7)(), SeededGenerator(43).stream(Experiment::Clt, 7)());
}

TEST(Streams, UniformIsInUnitInterval) {
  RngStream r = SeededGenerator(1).stream(1, 1);
  for (int i = 0; i < 10000; ++i) {
    double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Parallel, ResultsDoNotDependOnWorkers) {
  SeededGenerator g(9);
  auto f = [&](std::size_t t) { return g.stream(Experiment::Sample, t)(); };
  auto one = run_trials<std::uint64_t>(1000, 1, f);
  for (unsigned w : {2u, 3u, 8u}) EXPECT_EQ(run_trials<std::uint64_t>(1000, w, f), one);
}

TEST(Parallel, PropagatesExceptions) {
  auto f = [](std::size_t t) -> int {
    if (t == 500) throw std::runtime_error("boom");
    return 0;
  };
  EXPECT_THROW(run_trials<int>(1000, 4, f), std::runtime_error);
  EXPECT_TRUE(run_trials<int>(0, 4, f).empty());
}

TEST(SampleWord, SingleRowLetter) {
  RngStream r = SeededGenerator(0).stream(1, 0);
  EXPECT_EQ(sample_word(ThomaParams::make({1.0}, {}, 0.0), 5, r), Word(5, X1));
}

TEST(SampleWord, PureContinuousLettersAreDistinct) {
  RngStream r = SeededGenerator(0).stream(1, 0);
  Word w = sample_word(ThomaParams::make({}, {}, 1.0), 3, r);
  ASSERT_EQ(w.size(), 3u);
  for (const auto& l : w) EXPECT_EQ(l.kind, LetterKind::Cont);
  EXPECT_FALSE(w[0] == w[1] || w[1] == w[2] || w[0] == w[2]);
}

TEST(SampleWord, LetterFrequencyConcentrates) {
  RngStream r = SeededGenerator(0).stream(1, 0);
  const ThomaParams p = ThomaParams::make({0.5}, {0.5}, 0.0);
  Word w = sample_word(p, 1000000, r);
  const double f = static_cast<double>(letter_counts(w, p).row(1)) / 1e6;
  EXPECT_GE(f, 0.497);
  EXPECT_LE(f, 0.503);
}

TEST(SampleWord, LetterLawPassesChiSquare) {
  const ThomaParams p = ThomaParams::make({0.4, 0.25}, {0.2}, 0.15);
  RngStream r = SeededGenerator(4).stream(1, 0);
  LetterCounts c = letter_counts(sample_word(p, 100000, r), p);
  std::vector<std::int64_t> obs{c.row(1), c.row(2), c.col(1), c.cont};
  auto res = chi_square_goodness(obs, std::vector<double>{0.4, 0.25, 0.2, 0.15});
  EXPECT_GT(res.p_value, 1e-3) << res.statistic;
}

TEST(SamplePoisson, TinyMeanGivesEmptyWord) {
  RngStream r = SeededGenerator(0).stream(1, 0);
  EXPECT_TRUE(sample_word_poisson(ThomaParams::make({1.0}, {}, 0.0), 1e-9, r).empty());
  EXPECT_THROW(sample_word_poisson(ThomaParams::make({1.0}, {}, 0.0), 0.0, r), std::invalid_argument);
}

TEST(SamplePoisson, MeanLength) {
  const ThomaParams p = ThomaParams::make({0.6}, {0.4}, 0.0);
  const SeededGenerator g(3);
  double sum = 0.0;
  for (std::size_t t = 0; t < 10000; ++t) {
    RngStream r = g.stream(Experiment::Poisson, t);
    sum += static_cast<double>(sample_word_poisson(p, 100.0, r).size());
  }
  EXPECT_NEAR(sum / 10000.0, 100.0, 3.0);
}

TEST(SamplePoisson, LengthLawWithOneLetter) {
  const ThomaParams p = ThomaParams::make({1.0}, {}, 0.0);
  const SeededGenerator g(3);
  const double nu = 2.5;
  const std::size_t T = 100000;
  std::vector<std::int64_t> counts(8, 0);
  for (std::size_t t = 0; t < T; ++t) {
    RngStream r = g.stream(Experiment::Poisson, t);
    Word w = sample_word_poisson(p, nu, r);
    ASSERT_TRUE(std::all_of(w.begin(), w.end(), [](const Letter& l) { return l == X1; }));
    ++counts[std::min<std::size_t>(w.size(), 7)];
  }
  std::vector<double> probs(8);
  double tail = 1.0;
  for (int k = 0; k < 7; ++k) {
    probs[k] = std::exp(-nu) * std::pow(nu, k) / std::tgamma(k + 1.0);
    tail -= probs[k];
  }
  probs[7] = tail;
  EXPECT_GT(chi_square_goodness(counts, probs).p_value, 1e-3);
}

TEST(Amalgamate, TwoColumnsIntoOneRow) {
  const ThomaParams p = ThomaParams::make({0.5}, {0.3, 0.2}, 0.0);
  const LinearOrder o = LinearOrder::parse("x1<y2<y1", 1, 2);
  Amalgamation a = amalgamate(p, o, {1, 2, 0.0, 1.0});
  EXPECT_EQ(sorted(a.params.alphas()), (std::vector<double>{0.5, 0.5}));
  EXPECT_TRUE(a.params.betas().empty());
  Letter z = a.mapping(Y1);
  EXPECT_EQ(z, a.mapping(Y2));
  EXPECT_EQ(z.kind, LetterKind::Row);
  EXPECT_EQ(a.order.tie_class(z), TieClass::Increasing);
  EXPECT_TRUE(a.order.less(a.mapping(X1), z));
}

TEST(Amalgamate, NonIntervalIsRejected) {
  const ThomaParams p = ThomaParams::make({0.5}, {0.3, 0.2}, 0.0);
  const LinearOrder o = LinearOrder::parse("y1<x1<y2", 1, 2);
  EXPECT_THROW(amalgamate(p, o, {2, 1, 0.0, 1.0}), std::invalid_argument);
  EXPECT_THROW(amalgamate(p, o, {0, 5, 0.0, 1.0}), std::invalid_argument);
}

TEST(Amalgamate, SingleRowLetterIsUnchanged) {
  const ThomaParams p = ThomaParams::make({0.5, 0.3}, {0.2}, 0.0);
  const LinearOrder o = LinearOrder::standard(p);
  Amalgamation a = amalgamate(p, o, {1, 1, 0.0, 1.0});
  EXPECT_EQ(a.params.alphas(), p.alphas());
  EXPECT_EQ(a.params.betas(), p.betas());
  EXPECT_EQ(a.mapping(Letter::row(2)), Letter::row(2));
}

TEST(Amalgamate, PartOfG) {
  const ThomaParams p = ThomaParams::make({0.7}, {}, 0.3);
  const LinearOrder o = LinearOrder::standard(p);
  // G is the top segment; its lower half [0, 0.5) alone is an interval
  Amalgamation a = amalgamate(p, o, {1, 1, 0.0, 0.5});
  EXPECT_NEAR(a.params.gamma(), 0.15, 1e-15);
  EXPECT_EQ(sorted(a.params.alphas()), (std::vector<double>{0.15, 0.7}));
  Letter z = a.mapping(Letter::cont(0.2));
  EXPECT_EQ(z.kind, LetterKind::Row);
  Letter rest = a.mapping(Letter::cont(0.75));
  EXPECT_EQ(rest.kind, LetterKind::Cont);
  EXPECT_NEAR(rest.value, 0.5, 1e-15);
}

TEST(AmalgamateWord, Letterwise) {
  const ThomaParams p = ThomaParams::make({0.5}, {0.3, 0.2}, 0.0);
  Amalgamation a = amalgamate(p, LinearOrder::parse("x1<y2<y1", 1, 2), {1, 2, 0.0, 1.0});
  const Letter z = a.mapping(Y1);
  EXPECT_EQ(amalgamate_word(Word{X1, Y1, Y2}, a.mapping), (Word{a.mapping(X1), z, z}));
  Word untouched{X1, X1};
  EXPECT_EQ(amalgamate_word(untouched, a.mapping), (Word{a.mapping(X1), a.mapping(X1)}));
}

TEST(AmalgamateWord, PushforwardHasTheAmalgamatedLaw) {
  const ThomaParams p = ThomaParams::make({0.4, 0.25}, {0.2}, 0.15);
  const LinearOrder o = LinearOrder::standard(p);
  // x2, y1 and the lower half of G collapse into one letter
  Amalgamation a = amalgamate(p, o, {1, 3, 0.0, 0.5});
  const LetterSampler s(p);
  RngStream r = SeededGenerator(6).stream(1, 0);
  Word w = amalgamate_word(sample_word(s, 100000, r), a.mapping);
  LetterCounts c = letter_counts(w, a.params);
  std::vector<std::int64_t> obs;
  std::vector<double> probs;
  for (std::size_t i = 1; i <= a.params.num_alphas(); ++i) {
    obs.push_back(c.row(i));
    probs.push_back(a.params.alpha(i));
  }
  for (std::size_t j = 1; j <= a.params.num_betas(); ++j) {
    obs.push_back(c.col(j));
    probs.push_back(a.params.beta(j));
  }
  obs.push_back(c.cont);
  probs.push_back(a.params.gamma());
  EXPECT_NEAR(a.params.gamma(), 0.075, 1e-15);
  auto res = chi_square_goodness(obs, probs);
  EXPECT_GT(res.p_value, 1e-3) << res.statistic;
}

TEST(Reduction, KeepsLeadingAlphasAndRemovesG) {
  const ThomaParams p = ThomaParams::make({0.4, 0.25}, {0.2}, 0.15);
  Reduction red = reduce_to_finite(p, 2);
  EXPECT_DOUBLE_EQ(red.params.alpha(1), 0.4);
  EXPECT_DOUBLE_EQ(red.params.alpha(2), 0.25);
  EXPECT_EQ(red.params.gamma(), 0.0);
  const LetterSampler s(p);
  RngStream r = SeededGenerator(1).stream(1, 0);
  for (const auto& l : red.map_word(sample_word(s, 1000, r))) {
    EXPECT_TRUE(l.is_discrete());
    EXPECT_TRUE(letter_valid(l, red.params));
  }
  EXPECT_THROW(reduce_to_finite(p, 3), std::invalid_argument);
}
