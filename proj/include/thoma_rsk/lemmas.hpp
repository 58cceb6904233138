#pragma once

// Verification suites: exhaustive checks at small size, coupled Monte Carlo
// checks at scale, and the worked examples. Each returns a CheckResult.

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "thoma_rsk/core.hpp"
#include "thoma_rsk/diagnostics.hpp"
#include "thoma_rsk/exact.hpp"
#include "thoma_rsk/parallel.hpp"
#include "thoma_rsk/rsk.hpp"
#include "thoma_rsk/sampling.hpp"
#include "thoma_rsk/stats.hpp"

namespace thoma {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

inline std::string strprintf(const char* fmt, ...) __attribute__((format(printf, 1, 2)));
inline std::string strprintf(const char* fmt, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  return buf;
}

/// The three parameter points used throughout the checks.
inline std::vector<ThomaParams> standard_test_matrix() {
  return {ThomaParams::make({0.6}, {0.4}, 0.0), ThomaParams::make({0.5, 0.3}, {0.2}, 0.0),
          ThomaParams::make({0.4, 0.25}, {0.2}, 0.15)};
}

inline std::string params_label(const ThomaParams& p) {
  std::string s = "a=(";
  for (std::size_t i = 0; i < p.alphas().size(); ++i) s += (i ? "," : "") + strprintf("%g", p.alphas()[i]);
  s += ") b=(";
  for (std::size_t i = 0; i < p.betas().size(); ++i) s += (i ? "," : "") + strprintf("%g", p.betas()[i]);
  return s + strprintf(") g=%g", p.gamma());
}

/// G first, then columns from last to first interleaved with rows from last
/// to first. Keeps the classes of every letter.
inline LinearOrder scrambled_order(const ThomaParams& p) {
  std::vector<Segment> segs{Segment::block_g()};
  std::size_t i = p.num_alphas(), j = p.num_betas();
  while (i > 0 || j > 0) {
    if (j > 0) segs.push_back(Segment::discrete(Letter::col(static_cast<std::uint32_t>(j--)), TieClass::Decreasing));
    if (i > 0) segs.push_back(Segment::discrete(Letter::row(static_cast<std::uint32_t>(i--)), TieClass::Increasing));
  }
  return LinearOrder(std::move(segs), p.num_alphas(), p.num_betas(), false);
}

//---------------------------------------------------------------------------//
// Worked examples
//---------------------------------------------------------------------------//

inline Word example_rsk_word() {
  return {Letter::row(1), Letter::col(1), Letter::col(1), Letter::col(2),
          Letter::row(2), Letter::row(1), Letter::col(1)};
}

inline Word example_restriction_word() {
  const int idx[] = {2, 1, 3, 2, 1, 2, 3, 3, 2, 3, 1, 3, 2};
  Word w;
  for (int i : idx) w.push_back(Letter::row(static_cast<std::uint32_t>(i)));
  return w;
}

inline CheckResult check_rsk_example() {
  const LinearOrder order = LinearOrder::standard(2, 2);
  RskOutput out = rsk(example_rsk_word(), order);
  const auto x1 = Letter::row(1), x2 = Letter::row(2), y1 = Letter::col(1), y2 = Letter::col(2);
  const std::vector<std::vector<Letter>> R{{x1, x1, y1}, {x2, y2}, {y1}, {y1}};
  const std::vector<std::vector<int>> S{{1, 2, 4}, {3, 7}, {5}, {6}};
  const bool ok = out.shape == YoungDiagram({3, 2, 1, 1}) && out.R.rows == R && out.S.rows == S &&
                  rsk_bijection_inverse(out.R, out.S, order) == example_rsk_word();
  return {"example: RSK of x1 y1 y1 y2 x2 x1 y1", ok, "shape " + out.shape.to_string()};
}

inline CheckResult check_restriction_example() {
  const LinearOrder order = LinearOrder::standard(3, 0);
  const Word w = example_restriction_word();
  const auto x2 = Letter::row(2), x3 = Letter::row(3);
  auto to_word = [](std::initializer_list<int> idx) {
    Word out;
    for (int i : idx) out.push_back(Letter::row(static_cast<std::uint32_t>(i)));
    return out;
  };
  const Word restricted = restrict_word(w, x2, x3);
  const Word d = possible_transformation(w, x2, x3, order);
  const int r = rho(restricted, x2, x3);
  const bool ok = restricted == to_word({2, 3, 2, 2, 3, 3, 2, 3, 3, 2}) && r == 2 &&
                  d == to_word({2, 3, 2, 3, 2, 3, 2, 2, 3, 3});
  return {"example: restriction, result and possible transformation", ok, strprintf("rho=%d", r)};
}

//---------------------------------------------------------------------------//
// Exhaustive suites
//---------------------------------------------------------------------------//

/// Calls fn(word) for every word of length n over `letters`.
template <class Fn>
void for_each_word(const std::vector<Letter>& letters, std::size_t n, Fn&& fn) {
  std::vector<std::size_t> digits(n, 0);
  Word w(n, letters.empty() ? Letter{} : letters[0]);
  if (letters.empty() && n > 0) return;
  for (;;) {
    fn(static_cast<const Word&>(w));
    std::size_t pos = 0;
    while (pos < n && ++digits[pos] == letters.size()) {
      digits[pos] = 0;
      w[pos] = letters[0];
      ++pos;
    }
    if (pos == n) return;
    w[pos] = letters[digits[pos]];
  }
}

inline std::vector<Letter> discrete_letters(const ThomaParams& p) {
  std::vector<Letter> out;
  for (std::uint32_t i = 1; i <= p.num_alphas(); ++i) out.push_back(Letter::row(i));
  for (std::uint32_t j = 1; j <= p.num_betas(); ++j) out.push_back(Letter::col(j));
  return out;
}

/// All types (n_i, n'_j, 0) of total n over the discrete letters.
inline std::vector<LetterCounts> all_types(std::size_t rows, std::size_t cols, std::int64_t n) {
  std::vector<LetterCounts> out;
  std::vector<std::int64_t> parts(rows + cols, 0);
  std::function<void(std::size_t, std::int64_t)> rec = [&](std::size_t k, std::int64_t left) {
    if (k + 1 == parts.size()) {
      parts[k] = left;
      LetterCounts c;
      c.rows.assign(parts.begin(), parts.begin() + static_cast<std::ptrdiff_t>(rows));
      c.cols.assign(parts.begin() + static_cast<std::ptrdiff_t>(rows), parts.end());
      out.push_back(std::move(c));
      return;
    }
    for (std::int64_t v = 0; v <= left; ++v) {
      parts[k] = v;
      rec(k + 1, left - v);
    }
  };
  if (!parts.empty()) rec(0, n);
  return out;
}

/// Inverse ∘ rsk is the identity on every word over {x1, x2, y1} up to
/// length `max_len`, and the image has exactly as many pairs as there are
/// valid (R, S) pairs, so rsk ∘ inverse is the identity as well.
inline CheckResult check_bijection_exhaustive(std::size_t max_len) {
  const ThomaParams p = ThomaParams::make({0.5, 0.3}, {0.2}, 0.0);
  const LinearOrder order = LinearOrder::standard(p);
  const auto letters = discrete_letters(p);
  std::size_t words = 0, failures = 0;
  for (std::size_t n = 0; n <= max_len; ++n) {
    std::set<std::string> seen;
    std::size_t count_n = 0;
    for_each_word(letters, n, [&](const Word& w) {
      ++words;
      ++count_n;
      RskOutput out = rsk(w, order);
      if (!out.R.is_valid(order) || !out.S.is_valid() || rsk_bijection_inverse(out.R, out.S, order) != w)
        ++failures;
      seen.insert(to_ascii(out.R) + "|" + to_ascii(out.S));
    });
    if (seen.size() != count_n) ++failures;
    // valid pairs: Σ_λ dim λ · #{A_p-tableaux of shape λ}
    if (n >= 1 && n <= static_cast<std::size_t>(kTableauCountCap)) {
      std::uint64_t pairs = 0;
      for (const auto& lambda : partitions(static_cast<int>(n))) {
        std::uint64_t fillings = 0;
        for (const auto& type : all_types(p.num_alphas(), p.num_betas(), static_cast<std::int64_t>(n)))
          fillings += count_ap_tableaux(lambda, type, order);
        pairs += fillings * dim_hook(lambda);
      }
      if (pairs != count_n) ++failures;
    }
  }
  return {"bijection: exhaustive over 3 letters", failures == 0,
          strprintf("lengths<=%zu words=%zu failures=%zu", max_len, words, failures)};
}

/// Greene invariants equal the partial row and column sums of the shape for
/// every word of length ≤ max_len over {x1, x2, y1, y2}, all k.
inline CheckResult check_greene_exhaustive(std::size_t max_len) {
  const ThomaParams p = ThomaParams::make({0.3, 0.2}, {0.3, 0.2}, 0.0);
  // interleaved so that both tie classes sit between each other
  const LinearOrder order = LinearOrder::parse("x1<y2<x2<y1", 2, 2);
  const auto letters = discrete_letters(p);
  std::size_t words = 0, failures = 0;
  for (std::size_t n = 1; n <= max_len; ++n) {
    for_each_word(letters, n, [&](const Word& w) {
      ++words;
      const YoungDiagram lam = rsk_shape(w, order);
      for (std::size_t k = 1; k <= n; ++k) {
        if (greene_rk(w, order, k) != lam.row_prefix_sum(k) || greene_ck(w, order, k) != lam.col_prefix_sum(k)) {
          ++failures;
          break;
        }
      }
    });
  }
  return {"greene: exhaustive over 4 letters", failures == 0,
          strprintf("lengths<=%zu words=%zu failures=%zu", max_len, words, failures)};
}

/// The law of (shape, type) under three orders agrees within `tol`.
inline CheckResult check_order_invariance(const ThomaParams& p, int max_n, double tol = 1e-10) {
  const std::vector<LinearOrder> orders{LinearOrder::standard(p), LinearOrder::finite_alphabet(p),
                                        scrambled_order(p)};
  double worst = 0.0;
  for (int n = 1; n <= max_n; ++n) {
    std::vector<std::map<std::pair<YoungDiagram, LetterCounts>, double>> laws;
    for (const auto& o : orders) laws.push_back(enumerated_shape_type_distribution(p, n, o));
    std::set<std::pair<YoungDiagram, LetterCounts>> keys;
    for (const auto& law : laws)
      for (const auto& [k, v] : law) keys.insert(k);
    for (const auto& k : keys) {
      auto get = [&k](const auto& law) {
        auto it = law.find(k);
        return it == law.end() ? 0.0 : it->second;
      };
      for (std::size_t i = 1; i < laws.size(); ++i) worst = std::max(worst, std::abs(get(laws[0]) - get(laws[i])));
    }
  }
  return {"order invariance of (shape, type) " + params_label(p), worst <= tol,
          strprintf("n<=%d max diff %.3g", max_n, worst)};
}

/// Exhaustive word enumeration through RSK reproduces measure_Mn.
inline CheckResult check_oracle_equivalence(const ThomaParams& p, int max_n, double tol = 1e-10) {
  double worst = 0.0;
  for (int n = 1; n <= max_n; ++n) {
    const ExactMeasure m = measure_Mn(p, n);
    const auto enumerated = enumerated_shape_distribution(p, n, LinearOrder::standard(p));
    for (const auto& [lambda, prob] : m.table) {
      auto it = enumerated.find(lambda);
      worst = std::max(worst, std::abs(prob - (it == enumerated.end() ? 0.0 : it->second)));
    }
    for (const auto& [lambda, prob] : enumerated)
      if (!m.table.count(lambda)) worst = std::max(worst, prob);
  }
  return {"exact measure vs enumeration " + params_label(p), worst <= tol,
          strprintf("n<=%d max diff %.3g", max_n, worst)};
}

inline CheckResult check_coherency(const ThomaParams& p, int max_n, double tol = 1e-10) {
  double worst = 0.0;
  for (int n = 1; n <= max_n; ++n) worst = std::max(worst, coherency_residual(p, n));
  return {"coherency " + params_label(p), worst <= tol, strprintf("n<=%d max residual %.3g", max_n, worst)};
}

inline CheckResult check_total_mass(const ThomaParams& p, int max_n, double tol = 1e-10) {
  double worst = 0.0;
  for (int n = 1; n <= max_n; ++n) worst = std::max(worst, std::abs(measure_Mn(p, n).total() - 1.0));
  return {"total mass " + params_label(p), worst <= tol, strprintf("n<=%d max |mass-1| %.3g", max_n, worst)};
}

/// Running RSK on an {a,b}-word (a < b in L_e) leaves exactly ρ letters b in
/// the first row.
inline CheckResult check_rho_first_row(std::size_t max_len) {
  const LinearOrder order = LinearOrder::standard(2, 0);
  const Letter a = Letter::row(1), b = Letter::row(2);
  std::size_t words = 0, failures = 0;
  for (std::size_t n = 0; n <= max_len; ++n) {
    for_each_word({a, b}, n, [&](const Word& w) {
      ++words;
      RowInserter ins(order);
      for (const Letter& l : w) ins.insert(l);
      int bs = 0;
      for (const auto& c : ins.first_row()) bs += c.letter == b;
      if (bs != rho(w, a, b)) ++failures;
    });
  }
  return {"result equals b's in the first row", failures == 0,
          strprintf("lengths<=%zu words=%zu failures=%zu", max_len, words, failures)};
}

namespace detail {

/// ρ(d_w) ≤ ρ(w_{a,b}) and d_w rearranges w_{a,b}; returns false on violation.
inline bool possible_transformation_ok(const Word& w, const Letter& a, const Letter& b, const LinearOrder& order) {
  const Word r = restrict_word(w, a, b);
  const Word d = possible_transformation(w, a, b, order);
  if (d.size() != r.size()) return false;
  if (std::count(d.begin(), d.end(), a) != std::count(r.begin(), r.end(), a)) return false;
  return rho(d, a, b) <= rho(r, a, b);
}

}  // namespace detail

inline CheckResult check_transformation_exhaustive(std::size_t max_len) {
  const LinearOrder order = LinearOrder::standard(3, 0);
  const std::vector<Letter> letters{Letter::row(1), Letter::row(2), Letter::row(3)};
  std::size_t words = 0, failures = 0;
  for (std::size_t n = 0; n <= max_len; ++n) {
    for_each_word(letters, n, [&](const Word& w) {
      ++words;
      for (std::size_t k = 0; k + 1 < letters.size(); ++k)
        if (!detail::possible_transformation_ok(w, letters[k], letters[k + 1], order)) ++failures;
    });
  }
  return {"possible transformation: exhaustive over 3 letters", failures == 0,
          strprintf("lengths<=%zu words=%zu violations=%zu", max_len, words, failures)};
}

inline CheckResult check_transformation_random(std::size_t words, std::size_t n, const SeededGenerator& gen,
                                       unsigned workers) {
  const ThomaParams p = ThomaParams::make({0.3, 0.25, 0.2, 0.15, 0.1}, {}, 0.0);
  const LinearOrder order = LinearOrder::standard(p);
  const LetterSampler sampler(p);
  auto bad = run_trials<int>(words, workers, [&](std::size_t t) {
    RngStream rng = gen.stream(Experiment::PossibleTransformation, t);
    Word w = sample_word(sampler, n, rng);
    int v = 0;
    for (std::uint32_t k = 1; k < 5; ++k)
      v += !detail::possible_transformation_ok(w, Letter::row(k), Letter::row(k + 1), order);
    return v;
  });
  std::size_t total = 0;
  for (int v : bad) total += static_cast<std::size_t>(v);
  return {"possible transformation: random words over 5 letters", total == 0,
          strprintf("words=%zu n=%zu violations=%zu", words, n, total)};
}

/// E Ψ(n) by exact iteration is nondecreasing and below 2q/(1−q)².
inline CheckResult check_walk_bound(double q1, double q3, std::size_t max_n) {
  const WalkConfig cfg = WalkConfig::make(q1, q3);
  const auto series = walk_expectation_series(cfg, max_n);
  const double bound = cfg.expectation_bound();
  bool ok = true;
  for (std::size_t k = 0; k < series.size(); ++k) {
    if (series[k] > bound) ok = false;
    if (k > 0 && series[k] < series[k - 1] - 1e-12) ok = false;
  }
  return {strprintf("walk expectation bound q1=%g q3=%g", q1, q3), ok,
          strprintf("E psi(%zu)=%.12g bound=%.12g", max_n, series.back(), bound)};
}

/// conditional_covariance equals theoretical_covariance entrywise.
inline CheckResult check_conditional_identity(const ThomaParams& p, double tol = 1e-12) {
  const std::size_t K = p.num_alphas(), L = p.num_betas();
  const Matrix a = conditional_covariance(p, K, L), b = theoretical_covariance(p, K, L);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
  return {"conditional covariance identity " + params_label(p), worst <= tol, strprintf("max diff %.3g", worst)};
}

//---------------------------------------------------------------------------//
// Coupled Monte Carlo suites
//---------------------------------------------------------------------------//

inline CheckResult check_reduction_dominance(const ThomaParams& p, std::size_t K, std::size_t n, std::size_t kmax,
                                             const RunOptions& opt) {
  const std::size_t v = reduction_dominance_violations(p, K, n, kmax, opt);
  return {"dominance under the finite reduction " + params_label(p), v == 0,
          strprintf("trials=%zu n=%zu k<=%zu violations=%zu", opt.trials, n, kmax, v)};
}

/// Dominance for a single amalgamation of the segment range `spec` of the
/// standard order.
inline CheckResult check_amalgamation_dominance(const ThomaParams& p, const AmalgamationSpec& spec, std::size_t n,
                                                std::size_t kmax, const RunOptions& opt) {
  const LinearOrder order = LinearOrder::standard(p);
  const Amalgamation am = amalgamate(p, order, spec);
  const std::size_t v = dominance_violations(
      p, order, am.order, [&am](const Word& w) { return amalgamate_word(w, am.mapping); }, n, kmax, opt);
  return {strprintf("dominance under amalgamation of segments %zu..%zu", spec.first, spec.last) +
              (spec.g_lo > 0.0 || spec.g_hi < 1.0 ? strprintf(" G[%g,%g)", spec.g_lo, spec.g_hi) : std::string()),
          v == 0, strprintf("trials=%zu n=%zu k<=%zu violations=%zu", opt.trials, n, kmax, v)};
}

inline CheckResult check_transpose_identity(const ThomaParams& p, std::size_t n, const LinearOrder& order,
                                            const RunOptions& opt) {
  const std::size_t v = transpose_identity_failures(p, n, order, opt);
  return {"transposed map gives the transposed shape under " + order.to_string(), v == 0,
          strprintf("trials=%zu n=%zu failures=%zu", opt.trials, n, v)};
}

//---------------------------------------------------------------------------//
// The full suite
//---------------------------------------------------------------------------//

struct LemmaOptions {
  std::size_t exhaustive_cap = 8;   // bijection and Greene word lengths
  std::size_t transformation_cap = 9;  // exhaustive possible-transformation lengths
  std::size_t rho_cap = 14;         // exhaustive {a,b}-word lengths
  int order_invariance_n = 5;
  int oracle_n = 5;                 // 6 for parameter points without G
  int coherency_n = 7;
  std::size_t trials = 100000;      // coupled Monte Carlo checks
  std::size_t random_words = 10000;
  unsigned workers = 1;
  SeededGenerator gen{};
};

/// Runs every suite; `progress(name)` is called before each check.
template <class Progress>
std::vector<CheckResult> run_lemma_suite(const LemmaOptions& o, Progress&& progress) {
  std::vector<CheckResult> out;
  auto run = [&](const std::string& label, auto&& fn) {
    progress(label);
    out.push_back(fn());
  };
  const auto matrix = standard_test_matrix();
  const RunOptions mc{o.trials, o.workers, o.gen};

  run("examples", [] { return check_rsk_example(); });
  run("examples", [] { return check_restriction_example(); });
  run("bijection", [&] { return check_bijection_exhaustive(o.exhaustive_cap); });
  run("greene", [&] { return check_greene_exhaustive(o.exhaustive_cap); });
  for (const auto& p : matrix) {
    const int oracle_n = p.gamma() > 0.0 ? o.oracle_n : o.oracle_n + 1;
    run("oracle", [&] { return check_oracle_equivalence(p, oracle_n); });
    run("coherency", [&] { return check_coherency(p, o.coherency_n); });
    run("mass", [&] { return check_total_mass(p, 12); });
    run("order invariance", [&] { return check_order_invariance(p, o.order_invariance_n); });
    run("conditional identity", [&] { return check_conditional_identity(p); });
  }
  const ThomaParams& p3 = matrix[2];
  run("dominance", [&] { return check_reduction_dominance(p3, 2, 50, 5, mc); });
  run("dominance", [&] { return check_amalgamation_dominance(p3, {1, 2, 0.0, 1.0}, 50, 5, mc); });
  run("dominance", [&] { return check_amalgamation_dominance(p3, {3, 3, 0.5, 1.0}, 50, 5, mc); });
  run("transpose", [&] { return check_transpose_identity(p3, 50, LinearOrder::standard(p3), mc); });
  run("transpose", [&] { return check_transpose_identity(p3, 50, scrambled_order(p3), mc); });
  for (auto [q1, q3] : {std::pair{0.2, 0.5}, std::pair{0.3, 0.4}, std::pair{0.1, 0.8}})
    run("walk", [&] { return check_walk_bound(q1, q3, 1000); });
  run("possible transformation", [&] { return check_transformation_exhaustive(o.transformation_cap); });
  run("possible transformation", [&] { return check_transformation_random(o.random_words, 40, o.gen, o.workers); });
  run("result", [&] { return check_rho_first_row(o.rho_cap); });
  return out;
}

inline std::vector<CheckResult> run_lemma_suite(const LemmaOptions& o) {
  return run_lemma_suite(o, [](const std::string&) {});
}

}  // namespace thoma
