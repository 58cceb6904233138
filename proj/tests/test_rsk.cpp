#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "oracles.hpp"
#include "thoma_rsk/lemmas.hpp"
#include "thoma_rsk/rsk.hpp"
#include "thoma_rsk/sampling.hpp"

using namespace thoma;

namespace {
const Letter X1 = Letter::row(1), X2 = Letter::row(2), Y1 = Letter::col(1), Y2 = Letter::col(2);
const LinearOrder kOrder22 = LinearOrder::standard(2, 2);
const LinearOrder kOrder11 = LinearOrder::standard(1, 1);
}  // namespace

TEST(RowInsert, AppendsALargerLetter) {
  InsertionTableau t = row_insert(InsertionTableau{{{X1}}}, Y1, kOrder11);
  EXPECT_EQ(t.rows, (std::vector<std::vector<Letter>>{{X1, Y1}}));
}

TEST(RowInsert, BumpsAStrictlyLargerEntry) {
  InsertionTableau t = row_insert(InsertionTableau{{{Y1}}}, X1, kOrder11);
  EXPECT_EQ(t.rows, (std::vector<std::vector<Letter>>{{X1}, {Y1}}));
}

TEST(RowInsert, LoLetterBumpsItsCopy) {
  InsertionTableau t = row_insert(InsertionTableau{{{Y1}}}, Y1, kOrder11);
  EXPECT_EQ(t.rows, (std::vector<std::vector<Letter>>{{Y1}, {Y1}}));
}

TEST(RowInsert, LeLetterSitsNextToItsCopy) {
  InsertionTableau t = row_insert(InsertionTableau{{{X1}}}, X1, kOrder11);
  EXPECT_EQ(t.rows, (std::vector<std::vector<Letter>>{{X1, X1}}));
}

TEST(Rsk, WorkedExample) {
  RskOutput out = rsk(example_rsk_word(), kOrder22);
  EXPECT_EQ(out.shape, YoungDiagram({3, 2, 1, 1}));
  EXPECT_EQ(out.R.rows, (std::vector<std::vector<Letter>>{{X1, X1, Y1}, {X2, Y2}, {Y1}, {Y1}}));
  EXPECT_EQ(out.S.rows, (std::vector<std::vector<int>>{{1, 2, 4}, {3, 7}, {5}, {6}}));
  EXPECT_TRUE(out.R.is_valid(kOrder22));
  EXPECT_TRUE(out.S.is_valid());
}

TEST(Rsk, RepeatedLetters) {
  EXPECT_EQ(rsk_shape(Word{X1, X1, X1}, kOrder11), YoungDiagram({3}));
  EXPECT_EQ(rsk_shape(Word{Y1, Y1, Y1}, kOrder11), YoungDiagram({1, 1, 1}));
}

TEST(Rsk, ShapeOnlyEngineAgreesWithFullRsk) {
  const ThomaParams p = ThomaParams::make({0.4, 0.25}, {0.2}, 0.15);
  const LetterSampler s(p);
  const SeededGenerator gen(5);
  for (std::size_t t = 0; t < 500; ++t) {
    RngStream rng = gen.stream(99, t);
    Word w = sample_word(s, 60, rng);
    for (const LinearOrder& o : {LinearOrder::standard(p), scrambled_order(p)}) {
      RskOutput out = rsk(w, o);
      ASSERT_EQ(rsk_shape(w, o), out.shape);
      ASSERT_TRUE(out.R.is_valid(o));
      ASSERT_TRUE(out.S.is_valid());
    }
  }
}

TEST(Rsk, DistinctLettersMatchClassicalSchensted) {
  // all-G words are words of distinct reals; the G class bumps equal entries,
  // which never occur, so the shape is the classical one
  std::mt19937_64 eng(3);
  const LinearOrder o = LinearOrder::standard(0, 0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<int> perm(12);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), eng);
    Word w;
    for (int v : perm) w.push_back(Letter::cont((v + 0.5) / 12.0));
    EXPECT_EQ(rsk_shape(w, o).rows(), oracle::schensted_shape(perm));
  }
}

TEST(Inverse, WorkedExample) {
  RskOutput out = rsk(example_rsk_word(), kOrder22);
  EXPECT_EQ(rsk_bijection_inverse(out.R, out.S, kOrder22), example_rsk_word());
}

TEST(Inverse, SingleBox) {
  EXPECT_EQ(rsk_bijection_inverse(InsertionTableau{{{X1}}}, StandardTableau{{{1}}}, kOrder11), Word{X1});
}

TEST(Inverse, RejectsMismatchedShapes) {
  EXPECT_THROW(rsk_bijection_inverse(InsertionTableau{{{X1}}}, StandardTableau{{{1, 2}}}, kOrder11),
               std::invalid_argument);
}

TEST(Inverse, RoundTripOnRandomWords) {
  const ThomaParams p = ThomaParams::make({0.3, 0.2}, {0.25, 0.1}, 0.15);
  const LetterSampler s(p);
  const SeededGenerator gen(11);
  const LinearOrder orders[] = {LinearOrder::standard(p), scrambled_order(p), LinearOrder::parse("y1<x2<G~<y2<x1", 2, 2)};
  for (std::size_t t = 0; t < 10000; ++t) {
    RngStream rng = gen.stream(Experiment::Bijection, t);
    Word w = sample_word(s, 30, rng);
    const LinearOrder& o = orders[t % 3];
    RskOutput out = rsk(w, o);
    ASSERT_EQ(rsk_bijection_inverse(out.R, out.S, o), w) << "trial " << t;
  }
}

TEST(Inverse, ExhaustiveBijection) {
  CheckResult r = check_bijection_exhaustive(6);
  EXPECT_TRUE(r.passed) << r.detail;
}

TEST(Transposed, TwoLetterWord) {
  Word w{Y1, Y1};
  EXPECT_EQ(transposed_rsk(w, kOrder11).shape, YoungDiagram({2}));
  EXPECT_EQ(rsk_shape(w, kOrder11), YoungDiagram({1, 1}));
}

TEST(Transposed, WorkedExampleGivesTheConjugate) {
  EXPECT_EQ(transposed_rsk(example_rsk_word(), kOrder22).shape, YoungDiagram({4, 2, 1}));
}

TEST(Transposed, ShapesAreConjugateOnRandomWords) {
  const ThomaParams p = ThomaParams::make({0.35, 0.2}, {0.2, 0.1}, 0.15);
  const LetterSampler s(p);
  const SeededGenerator gen(2);
  for (std::size_t t = 0; t < 2000; ++t) {
    RngStream rng = gen.stream(Experiment::Transpose, t);
    Word w = sample_word(s, t % 2 ? 5 : 25, rng);
    const LinearOrder o = t % 3 ? LinearOrder::standard(p) : scrambled_order(p);
    ASSERT_EQ(transposed_rsk(w, o).shape, rsk_shape(w, o).transpose());
  }
}

TEST(Transposed, DistinctContinuousLetters) {
  const LinearOrder o = LinearOrder::standard(0, 0);
  std::mt19937_64 eng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    Word w;
    for (int i = 0; i < 5; ++i) w.push_back(Letter::cont(u(eng)));
    EXPECT_EQ(transposed_rsk(w, o).shape, rsk_shape(w, o).transpose());
  }
}

TEST(Greene, WorkedExample) {
  const Word w = example_rsk_word();
  EXPECT_EQ(greene_rk(w, kOrder22, 1), 3);
  EXPECT_EQ(greene_ck(w, kOrder22, 1), 4);
  EXPECT_EQ(greene_rk(w, kOrder22, 2), 5);
  EXPECT_EQ(greene_ck(w, kOrder22, 2), 6);
}

TEST(Greene, RepeatedLetters) {
  EXPECT_EQ(greene_rk(Word{X1, X1, X1}, kOrder11, 1), 3);
  EXPECT_EQ(greene_ck(Word{X1, X1, X1}, kOrder11, 1), 1);
  EXPECT_EQ(greene_rk(Word{Y1, Y1, Y1}, kOrder11, 1), 1);
  EXPECT_EQ(greene_rk(Word{Y1, Y1, Y1}, kOrder11, 3), 3);
  EXPECT_EQ(greene_ck(Word{Y1, Y1, Y1}, kOrder11, 1), 3);
}

TEST(Greene, RejectsLongWords) {
  Word w(kGreeneCap + 1, X1);
  EXPECT_THROW(greene_rk(w, kOrder11, 1), std::invalid_argument);
}

TEST(Greene, MatchesShapeExhaustively) {
  CheckResult r = check_greene_exhaustive(6);
  EXPECT_TRUE(r.passed) << r.detail;
}

TEST(Ascii, RendersRows) {
  RskOutput out = rsk(example_rsk_word(), kOrder22);
  EXPECT_EQ(to_ascii(out.S), "1 2 4\n3 7\n5\n6\n");
}
