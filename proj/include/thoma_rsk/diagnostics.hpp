#pragma once

// Reflecting random walk Ψ, two-letter restrictions w_{a,b}, their result ρ,
// the possible transformation d_w, and the conditional Gaussian covariance.

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "thoma_rsk/core.hpp"
#include "thoma_rsk/numeric.hpp"
#include "thoma_rsk/rsk.hpp"
#include "thoma_rsk/sampling.hpp"

namespace thoma {

//---------------------------------------------------------------------------//
// Reflecting random walk
//---------------------------------------------------------------------------//

/// Right with q1, left with q3 (a left move from 0 stays at 0), hold otherwise.
struct WalkConfig {
  double q1 = 0.0;
  double q3 = 1.0;

  static WalkConfig make(double q1, double q3) {
    if (!(q1 >= 0.0 && q3 >= 0.0 && q1 + q3 <= 1.0 + 1e-15))
      throw std::invalid_argument("walk probabilities must be nonnegative and sum to at most 1");
    if (!(q1 < q3)) throw std::invalid_argument("walk needs q1 < q3");
    return {q1, q3};
  }

  double q2() const noexcept { return std::max(0.0, 1.0 - q1 - q3); }

  /// 2 Σ_i i q^i = 2q / (1 − q)² with q = q1 / q3.
  double expectation_bound() const noexcept {
    const double q = q1 / q3;
    return 2.0 * q / ((1.0 - q) * (1.0 - q));
  }
};

/// Ψ(n): position after n transitions from 0.
inline std::int64_t walk_position(const WalkConfig& cfg, std::int64_t steps, RngStream& rng) {
  std::int64_t pos = 0;
  for (std::int64_t s = 0; s < steps; ++s) {
    const double u = rng.uniform();
    if (u < cfg.q1)
      ++pos;
    else if (u < cfg.q1 + cfg.q3 && pos > 0)
      --pos;
  }
  return pos;
}

/// E Ψ(0), ..., E Ψ(n) by iterating the distribution a₀ Dᵏ over states 0..k.
inline std::vector<double> walk_expectation_series(const WalkConfig& cfg, std::size_t steps) {
  const double q1 = cfg.q1, q2 = cfg.q2(), q3 = cfg.q3;
  std::vector<double> dist(steps + 2, 0.0), next(steps + 2, 0.0);
  dist[0] = 1.0;
  std::vector<double> out;
  out.reserve(steps + 1);
  out.push_back(0.0);
  for (std::size_t k = 1; k <= steps; ++k) {
    // after k − 1 steps only states 0..k−1 carry mass
    next[0] = (q3 + q2) * dist[0] + q3 * dist[1];
    for (std::size_t i = 1; i <= k; ++i) next[i] = q1 * dist[i - 1] + q2 * dist[i] + q3 * dist[i + 1];
    std::swap(dist, next);
    CompensatedSum mean;
    for (std::size_t i = 1; i <= k; ++i) mean += static_cast<double>(i) * dist[i];
    out.push_back(mean.value());
  }
  return out;
}

inline double walk_expectation_exact(const WalkConfig& cfg, std::size_t steps) {
  return walk_expectation_series(cfg, steps).back();
}

//---------------------------------------------------------------------------//
// Restrictions, result, possible transformation
//---------------------------------------------------------------------------//

/// w_{a,b}: the subsequence of a's and b's.
inline Word restrict_word(std::span<const Letter> word, const Letter& a, const Letter& b) {
  Word out;
  for (const Letter& l : word)
    if (l == a || l == b) out.push_back(l);
  return out;
}

/// ρ: the largest (#b − #a) over all suffixes, the empty one included.
/// Throws std::invalid_argument if the word has other letters.
inline int rho(std::span<const Letter> word, const Letter& a, const Letter& b) {
  int diff = 0, best = 0;
  for (std::size_t i = word.size(); i-- > 0;) {
    if (word[i] == b)
      ++diff;
    else if (word[i] == a)
      --diff;
    else
      throw std::invalid_argument("rho expects a word over {a, b}");
    best = std::max(best, diff);
  }
  return best;
}

/// d_w(w_{a,b}): the a's and b's in the order they are bumped out of the
/// first row while inserting w, followed by those left in the first row
/// (left to right). Requires a < b adjacent L_e letters of `order`; throws
/// std::invalid_argument otherwise.
inline Word possible_transformation(std::span<const Letter> word, const Letter& a, const Letter& b,
                                    const LinearOrder& order) {
  if (!a.is_discrete() || !b.is_discrete() || !order.contains(a) || !order.contains(b))
    throw std::invalid_argument("a and b must be discrete letters of the order");
  const OrderKey ka = order.key(a), kb = order.key(b);
  if (ka.ties != TieClass::Increasing || kb.ties != TieClass::Increasing)
    throw std::invalid_argument("a and b must be L_e letters");
  if (kb.rank != ka.rank + 1) throw std::invalid_argument("a and b must be neighbours with a < b");

  RowInserter ins(order);
  Word out;
  for (const Letter& l : word) {
    ins.insert(l, [&](std::size_t row, const Letter& bumped) {
      if (row == 0 && (bumped == a || bumped == b)) out.push_back(bumped);
    });
  }
  for (const auto& cell : ins.first_row())
      if (cell.letter == a || cell.letter == b) out.push_back(cell.letter);
  return out;
}

//---------------------------------------------------------------------------//
// Conditional Gaussian covariance
//---------------------------------------------------------------------------//

/// Covariance of (X_1..X_K, Y_1..Y_L) for independent centered Gaussians with
/// variances α_i, β_j, γ conditioned on the sum of all of them being 0:
/// Σ − σσᵀ / s, with σ the variances of the kept coordinates and s the total
/// variance. Throws std::invalid_argument if K or L exceed the stored masses.
inline Matrix conditional_covariance(const ThomaParams& p, std::size_t K, std::size_t L) {
  if (K > p.num_alphas() || L > p.num_betas())
    throw std::invalid_argument("K or L exceeds the number of parameters");
  std::vector<double> var;
  for (std::size_t i = 1; i <= K; ++i) var.push_back(p.alpha(i));
  for (std::size_t j = 1; j <= L; ++j) var.push_back(p.beta(j));
  CompensatedSum total;
  total += p.gamma();
  for (double a : p.alphas()) total += a;
  for (double b : p.betas()) total += b;
  const double s = total.value();

  Matrix c(var.size());
  for (std::size_t i = 0; i < var.size(); ++i)
    for (std::size_t j = 0; j < var.size(); ++j) c(i, j) = (i == j ? var[i] : 0.0) - var[i] * var[j] / s;
  return c;
}

}  // namespace thoma
