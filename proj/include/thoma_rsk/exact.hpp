#pragma once

// Exact finite-n measures M_n(λ) = π(s_λ)·dim λ, where π sends the
// generating function of complete symmetric functions to
//   e^{γz} ∏ (1 + β_j z) / (1 − α_i z).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "thoma_rsk/core.hpp"
#include "thoma_rsk/numeric.hpp"
#include "thoma_rsk/rsk.hpp"

namespace thoma {

inline constexpr int kExactCap = 20;

//---------------------------------------------------------------------------//
// Truncated power series
//---------------------------------------------------------------------------//

/// Coefficients c_0..c_N of a power series, exact through degree N.
class TruncatedSeries {
 public:
  explicit TruncatedSeries(std::size_t degree) : coeffs_(degree + 1, 0.0) {}

  static TruncatedSeries one(std::size_t degree) {
    TruncatedSeries s(degree);
    s.coeffs_[0] = 1.0;
    return s;
  }
  /// 1 / (1 − a z)
  static TruncatedSeries geometric(double a, std::size_t degree) {
    TruncatedSeries s(degree);
    double p = 1.0;
    for (auto& c : s.coeffs_) {
      c = p;
      p *= a;
    }
    return s;
  }
  /// 1 + b z
  static TruncatedSeries linear(double b, std::size_t degree) {
    TruncatedSeries s = one(degree);
    if (degree >= 1) s.coeffs_[1] = b;
    return s;
  }

  std::size_t degree() const noexcept { return coeffs_.size() - 1; }
  double operator[](std::size_t k) const noexcept { return k < coeffs_.size() ? coeffs_[k] : 0.0; }
  double& operator[](std::size_t k) { return coeffs_.at(k); }
  const std::vector<double>& coefficients() const noexcept { return coeffs_; }

  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
    const std::size_t n = std::min(a.degree(), b.degree());
    TruncatedSeries out(n);
    for (std::size_t k = 0; k <= n; ++k) {
      CompensatedSum acc;
      for (std::size_t i = 0; i <= k; ++i) acc += a.coeffs_[i] * b.coeffs_[k - i];
      out.coeffs_[k] = acc.value();
    }
    return out;
  }

  /// exp of a series with zero constant term, via k b_k = Σ_{j=1..k} j a_j b_{k−j}.
  TruncatedSeries exp() const {
    if (coeffs_[0] != 0.0) throw std::invalid_argument("exp needs a zero constant term");
    TruncatedSeries out = one(degree());
    for (std::size_t k = 1; k <= degree(); ++k) {
      CompensatedSum acc;
      for (std::size_t j = 1; j <= k; ++j)
        acc += static_cast<double>(j) * coeffs_[j] * out.coeffs_[k - j];
      out.coeffs_[k] = acc.value() / static_cast<double>(k);
    }
    return out;
  }

 private:
  std::vector<double> coeffs_;
};

/// π(h_0), ..., π(h_N).
inline TruncatedSeries pi_h_series(const ThomaParams& p, std::size_t degree) {
  TruncatedSeries g(degree);
  if (degree >= 1) g[1] = p.gamma();
  TruncatedSeries out = g.exp();
  for (double b : p.betas()) out = out * TruncatedSeries::linear(b, degree);
  for (double a : p.alphas()) out = out * TruncatedSeries::geometric(a, degree);
  return out;
}

inline double pi_h(const ThomaParams& p, std::size_t n) { return pi_h_series(p, n)[n]; }

//---------------------------------------------------------------------------//
// Schur specialization, dimensions, partitions
//---------------------------------------------------------------------------//

/// det(h_{λ_i − i + j}) from precomputed π(h_k); `h` must reach degree
/// λ_1 + ℓ(λ) − 1.
inline double schur_from_h(const TruncatedSeries& h, const YoungDiagram& lambda) {
  const std::size_t l = lambda.num_rows();
  if (l == 0) return 1.0;
  std::vector<long double> m(l * l);
  for (std::size_t i = 0; i < l; ++i) {
    for (std::size_t j = 0; j < l; ++j) {
      long idx = static_cast<long>(lambda.rows()[i]) - static_cast<long>(i) + static_cast<long>(j);
      m[i * l + j] = idx < 0 ? 0.0L : static_cast<long double>(h[static_cast<std::size_t>(idx)]);
    }
  }
  // LU with partial pivoting
  long double det = 1.0L;
  for (std::size_t c = 0; c < l; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < l; ++r)
      if (std::fabs(m[r * l + c]) > std::fabs(m[piv * l + c])) piv = r;
    if (m[piv * l + c] == 0.0L) return 0.0;
    if (piv != c) {
      for (std::size_t j = 0; j < l; ++j) std::swap(m[c * l + j], m[piv * l + j]);
      det = -det;
    }
    det *= m[c * l + c];
    for (std::size_t r = c + 1; r < l; ++r) {
      long double f = m[r * l + c] / m[c * l + c];
      for (std::size_t j = c; j < l; ++j) m[r * l + j] -= f * m[c * l + j];
    }
  }
  return static_cast<double>(det);
}

/// π(s_λ) through the Jacobi–Trudi determinant.
inline double schur_specialization(const ThomaParams& p, const YoungDiagram& lambda) {
  auto degree = static_cast<std::size_t>(lambda.row(1)) + lambda.num_rows();
  return schur_from_h(pi_h_series(p, degree), lambda);
}

/// Number of standard tableaux of shape λ by the hook-length formula.
/// Exact for |λ| ≤ 34; throws std::domain_error beyond.
inline std::uint64_t dim_hook(const YoungDiagram& lambda) {
  const int n = lambda.size();
  if (n > 34) throw std::domain_error("dim_hook: diagram too large for exact arithmetic");
  unsigned __int128 num = 1;
  for (int k = 2; k <= n; ++k) num *= static_cast<unsigned>(k);
  unsigned __int128 hooks = 1;
  for (std::size_t i = 1; i <= lambda.num_rows(); ++i)
    for (int j = 1; j <= lambda.row(i); ++j)
      hooks *= static_cast<unsigned>(lambda.row(i) - j + lambda.col(static_cast<std::size_t>(j)) -
                                     static_cast<int>(i) + 1);
  return static_cast<std::uint64_t>(num / hooks);
}

/// All partitions of n in reverse-lexicographic order, (n) first.
inline std::vector<YoungDiagram> partitions(int n) {
  std::vector<YoungDiagram> out;
  if (n < 0) return out;
  if (n == 0) {
    out.emplace_back();
    return out;
  }
  std::vector<int> a{n};
  for (;;) {
    out.emplace_back(a);
    // find the right-most part larger than 1
    int ones = 0;
    while (!a.empty() && a.back() == 1) {
      a.pop_back();
      ++ones;
    }
    if (a.empty()) break;
    int v = --a.back();
    int rest = ones + 1;
    while (rest > 0) {
      int part = std::min(v, rest);
      a.push_back(part);
      rest -= part;
    }
  }
  return out;
}

/// Diagrams obtained from μ by adding one box.
inline std::vector<YoungDiagram> add_box(const YoungDiagram& mu) {
  std::vector<YoungDiagram> out;
  const auto& r = mu.rows();
  for (std::size_t i = 0; i <= r.size(); ++i) {
    if (i == r.size() || i == 0 || r[i - 1] > r[i]) {
      auto next = r;
      if (i == r.size())
        next.push_back(1);
      else
        ++next[i];
      out.emplace_back(std::move(next));
    }
  }
  return out;
}

//---------------------------------------------------------------------------//
// Exact measures
//---------------------------------------------------------------------------//

/// λ ↦ M_n(λ) over all partitions of n.
struct ExactMeasure {
  int n = 0;
  std::map<YoungDiagram, double> table;

  double at(const YoungDiagram& lambda) const {
    auto it = table.find(lambda);
    return it == table.end() ? 0.0 : it->second;
  }

  double total() const {
    CompensatedSum s;
    for (const auto& [d, v] : table) s += v;
    return s.value();
  }

  /// "partition;probability" lines in reverse-lexicographic order.
  std::string to_csv() const {
    std::string out;
    char buf[40];
    for (auto it = table.rbegin(); it != table.rend(); ++it) {
      std::snprintf(buf, sizeof buf, "%.15g", it->second);
      out += it->first.to_string();
      out += ';';
      out += buf;
      out += '\n';
    }
    return out;
  }
};

/// M_n for every partition of n. Throws std::invalid_argument above `cap`.
inline ExactMeasure measure_Mn(const ThomaParams& p, int n, int cap = kExactCap) {
  if (n < 0 || n > cap)
    throw std::invalid_argument("n = " + std::to_string(n) + " is above the exact cap " +
                                std::to_string(cap));
  ExactMeasure m;
  m.n = n;
  // Jacobi–Trudi needs h up to λ_1 + ℓ(λ) − 1 ≤ n
  TruncatedSeries h = pi_h_series(p, static_cast<std::size_t>(std::max(n, 1)));
  for (auto& lambda : partitions(n)) {
    double v = schur_from_h(h, lambda) * static_cast<double>(dim_hook(lambda));
    if (v < -1e-12)
      throw std::runtime_error("negative probability " + std::to_string(v) + " for " + lambda.to_string());
    m.table.emplace(std::move(lambda), std::max(v, 0.0));
  }
  return m;
}

/// max_μ |M_n(μ) − Σ_{μ↑λ} (dim μ / dim λ) M_{n+1}(λ)|.
inline double coherency_residual(const ThomaParams& p, int n, int cap = kExactCap + 1) {
  if (n + 1 > cap) throw std::invalid_argument("n + 1 is above the exact cap");
  ExactMeasure lower = measure_Mn(p, n, cap);
  ExactMeasure upper = measure_Mn(p, n + 1, cap);
  double worst = 0.0;
  for (const auto& [mu, mass] : lower.table) {
    const double dmu = static_cast<double>(dim_hook(mu));
    CompensatedSum s;
    for (const auto& lambda : add_box(mu))
      s += dmu / static_cast<double>(dim_hook(lambda)) * upper.at(lambda);
    worst = std::max(worst, std::abs(mass - s.value()));
  }
  return worst;
}

/// e^{−ν} ν^{|λ|} / |λ|! · M_{|λ|}(λ).
inline double poisson_weight(const ThomaParams& p, double nu, const YoungDiagram& lambda,
                             int cap = kExactCap) {
  if (!(nu > 0.0)) throw std::invalid_argument("nu must be positive");
  const int k = lambda.size();
  if (k > cap) throw std::invalid_argument("diagram above the exact cap");
  double log_poisson = -nu + k * std::log(nu) - std::lgamma(k + 1.0);
  if (k == 0) return std::exp(log_poisson);
  return std::exp(log_poisson) * measure_Mn(p, k, cap).at(lambda);
}

/// e^{−ν} Σ_{k>N} ν^k / k!, the mass lost by truncating at |λ| ≤ N.
inline double poisson_truncation_bound(double nu, int N) {
  CompensatedSum s;
  for (int k = N + 1;; ++k) {
    double term = std::exp(-nu + k * std::log(nu) - std::lgamma(k + 1.0));
    s += term;
    if (k > nu && term < 1e-18 * std::max(s.value(), 1e-300)) break;
    if (k > N + 100000) break;
  }
  return s.value();
}

//---------------------------------------------------------------------------//
// Exhaustive enumeration
//---------------------------------------------------------------------------//

/// Calls `fn(word, weight)` for every word of length n over the discrete
/// letters plus G. G letters are integrated out: each pattern of m G slots is
/// expanded into the m! relative orders, each of weight γ^m / m! times the
/// discrete masses. The weights sum to 1.
template <class Fn>
void enumerate_words(const ThomaParams& p, int n, Fn&& fn) {
  std::vector<Letter> symbols;
  std::vector<double> masses;
  for (std::uint32_t i = 1; i <= p.num_alphas(); ++i) {
    symbols.push_back(Letter::row(i));
    masses.push_back(p.alpha(i));
  }
  for (std::uint32_t j = 1; j <= p.num_betas(); ++j) {
    symbols.push_back(Letter::col(j));
    masses.push_back(p.beta(j));
  }
  const bool has_g = p.gamma() > 0.0;
  const std::size_t g_symbol = symbols.size();
  if (has_g) {
    symbols.push_back(Letter::cont(0.0));
    masses.push_back(p.gamma());
  }
  const std::size_t q = symbols.size();
  if (q == 0 || n < 0) return;

  std::vector<std::size_t> digits(static_cast<std::size_t>(n), 0);
  Word word(static_cast<std::size_t>(n));
  std::vector<std::size_t> g_slots;
  for (;;) {
    double weight = 1.0;
    g_slots.clear();
    for (std::size_t i = 0; i < digits.size(); ++i) {
      weight *= masses[digits[i]];
      word[i] = symbols[digits[i]];
      if (has_g && digits[i] == g_symbol) g_slots.push_back(i);
    }
    if (g_slots.empty()) {
      fn(static_cast<const Word&>(word), weight);
    } else {
      const std::size_t m = g_slots.size();
      double orderings = std::tgamma(static_cast<double>(m) + 1.0);
      std::vector<std::size_t> perm(m);
      std::iota(perm.begin(), perm.end(), 0);
      do {
        for (std::size_t k = 0; k < m; ++k)
          word[g_slots[k]] = Letter::cont(static_cast<double>(perm[k] + 1) / static_cast<double>(m + 1));
        fn(static_cast<const Word&>(word), weight / orderings);
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
    // odometer
    std::size_t pos = 0;
    while (pos < digits.size() && ++digits[pos] == q) digits[pos++] = 0;
    if (pos == digits.size()) break;
  }
}

/// μ_n(φ_p(w) = λ) by pushing every word through RSK.
inline std::map<YoungDiagram, double> enumerated_shape_distribution(const ThomaParams& p, int n,
                                                                    const LinearOrder& order) {
  std::map<YoungDiagram, CompensatedSum> acc;
  enumerate_words(p, n, [&](const Word& w, double weight) { acc[rsk_shape(w, order)] += weight; });
  std::map<YoungDiagram, double> out;
  for (auto& [d, s] : acc) out.emplace(d, s.value());
  return out;
}

/// Joint law of (φ_p(w), type(R(w))) by exhaustive enumeration.
inline std::map<std::pair<YoungDiagram, LetterCounts>, double> enumerated_shape_type_distribution(
    const ThomaParams& p, int n, const LinearOrder& order) {
  std::map<std::pair<YoungDiagram, LetterCounts>, CompensatedSum> acc;
  enumerate_words(p, n, [&](const Word& w, double weight) {
    acc[{rsk_shape(w, order), tableau_type(rsk(w, order).R, p)}] += weight;
  });
  std::map<std::pair<YoungDiagram, LetterCounts>, double> out;
  for (auto& [key, s] : acc) out.emplace(key, s.value());
  return out;
}

inline constexpr int kTableauCountCap = 12;

/// Number of A_p-tableau fillings of `shape` with x_i used n_i times, y_j used
/// n'_j times and m distinct G letters g_1 < ... < g_m. Throws above the cap.
inline std::uint64_t count_ap_tableaux(const YoungDiagram& shape, const LetterCounts& type,
                                       const LinearOrder& order, int cap = kTableauCountCap) {
  const int n = shape.size();
  if (n > cap) throw std::invalid_argument("shape above the tableau-count cap");
  if (type.total() != n) throw std::invalid_argument("type does not match the shape size");

  struct Pool {
    Letter letter;
    std::int64_t left;
  };
  std::vector<Pool> pool;
  for (std::uint32_t i = 1; i <= type.rows.size(); ++i)
    if (type.rows[i - 1] > 0) pool.push_back({Letter::row(i), type.rows[i - 1]});
  for (std::uint32_t j = 1; j <= type.cols.size(); ++j)
    if (type.cols[j - 1] > 0) pool.push_back({Letter::col(j), type.cols[j - 1]});
  for (std::int64_t k = 0; k < type.cont; ++k)
    pool.push_back({Letter::cont(static_cast<double>(k + 1) / static_cast<double>(type.cont + 1)), 1});
  for (const auto& item : pool)
    if (!order.contains(item.letter)) throw std::invalid_argument("type uses letters outside the order");

  std::vector<std::pair<std::size_t, std::size_t>> cells;
  for (std::size_t r = 0; r < shape.num_rows(); ++r)
    for (std::size_t c = 0; c < static_cast<std::size_t>(shape.rows()[r]); ++c) cells.emplace_back(r, c);

  std::vector<std::vector<Letter>> fill(shape.num_rows());
  for (std::size_t r = 0; r < shape.num_rows(); ++r) fill[r].resize(static_cast<std::size_t>(shape.rows()[r]));

  std::uint64_t count = 0;
  auto place = [&](auto&& self, std::size_t idx) -> void {
    if (idx == cells.size()) {
      ++count;
      return;
    }
    auto [r, c] = cells[idx];
    for (auto& item : pool) {
      if (item.left == 0) continue;
      const Letter& x = item.letter;
      if (c > 0 && compare_arrows(order, fill[r][c - 1], x) != Arrow::Up) continue;
      if (r > 0 && compare_arrows(order, x, fill[r - 1][c]) != Arrow::Down) continue;
      fill[r][c] = x;
      --item.left;
      self(self, idx + 1);
      ++item.left;
    }
  };
  place(place, 0);
  return count;
}

}  // namespace thoma
