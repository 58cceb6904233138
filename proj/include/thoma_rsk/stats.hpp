#pragma once

// Monte Carlo harnesses: row/column fluctuations against the Gaussian limit,
// drift of rows against letter counts, law of large numbers, the
// poissonized variants, and coupled checks of the lemmas at scale.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "thoma_rsk/core.hpp"
#include "thoma_rsk/numeric.hpp"
#include "thoma_rsk/parallel.hpp"
#include "thoma_rsk/rsk.hpp"
#include "thoma_rsk/sampling.hpp"

namespace thoma {

/// The limiting covariance of the scaled row/column fluctuations:
/// α_i − α_i² on the diagonal, −α_iα_j, −β_iβ_j, −α_iβ_j off it.
/// Throws std::invalid_argument unless α_1 > ... > α_K > 0 and
/// β_1 > ... > β_L > 0 (the Gaussian limit fails for repeated masses).
inline Matrix theoretical_covariance(const ThomaParams& p, std::size_t K, std::size_t L) {
  if (!p.strictly_monotone_up_to(K, L))
    throw std::invalid_argument("requested rows/columns need strictly decreasing masses");
  std::vector<double> m;
  for (std::size_t i = 1; i <= K; ++i) m.push_back(p.alpha(i));
  for (std::size_t j = 1; j <= L; ++j) m.push_back(p.beta(j));
  Matrix c(m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) c(i, j) = i == j ? m[i] - m[i] * m[i] : -m[i] * m[j];
  return c;
}

//---------------------------------------------------------------------------//
// Samples and reports
//---------------------------------------------------------------------------//

/// Per-trial vectors of length K + L, stored trial-major.
struct FluctuationSample {
  std::size_t dim = 0;
  std::size_t trials = 0;
  std::vector<double> values;

  double at(std::size_t trial, std::size_t k) const { return values[trial * dim + k]; }
  std::vector<double> marginal(std::size_t k) const {
    std::vector<double> out(trials);
    for (std::size_t t = 0; t < trials; ++t) out[t] = at(t, k);
    return out;
  }
};

struct CovarianceReport {
  std::size_t trials = 0;
  std::vector<double> mean;
  std::vector<double> mean_se;
  Matrix covariance;
  Matrix covariance_se;  // jackknife
  Matrix theory;
  std::vector<double> ks;  // marginal Kolmogorov–Smirnov vs Normal(0, theory_kk)
  double max_mean_dev_se = 0.0;
  double max_cov_dev_se = 0.0;
  double max_ks = 0.0;
};

/// sup |F_n − Φ(·/σ)| for the empirical CDF of `xs`. With σ = 0 the reference
/// law is the point mass at 0.
inline double ks_statistic_normal(std::vector<double> xs, double sigma) {
  if (xs.empty()) return 0.0;
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    // reference CDF at x and its left limit
    const double f = sigma > 0.0 ? normal_cdf(xs[i] / sigma) : (xs[i] >= 0.0 ? 1.0 : 0.0);
    const double f_left = sigma > 0.0 ? f : (xs[i] > 0.0 ? 1.0 : 0.0);
    // only the last of a run of ties carries the full jump
    const bool last_of_tie = i + 1 == xs.size() || xs[i + 1] != xs[i];
    const bool first_of_tie = i == 0 || xs[i - 1] != xs[i];
    if (last_of_tie) d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    if (first_of_tie) d = std::max(d, std::abs(f_left - static_cast<double>(i) / n));
  }
  return d;
}

/// Sample mean and covariance with standard errors: the mean SE from the
/// sample variance, the covariance SE by delete-one-block jackknife over
/// min(100, trials) contiguous blocks of trials.
inline CovarianceReport covariance_report(const FluctuationSample& s, const Matrix& theory) {
  const std::size_t d = s.dim, N = s.trials;
  if (N < 2) throw std::invalid_argument("covariance report needs at least two trials");
  if (theory.dim() != d) throw std::invalid_argument("theory matrix has the wrong dimension");
  CovarianceReport r;
  r.trials = N;
  r.theory = theory;

  r.mean.assign(d, 0.0);
  for (std::size_t k = 0; k < d; ++k) {
    CompensatedSum acc;
    for (std::size_t t = 0; t < N; ++t) acc += s.at(t, k);
    r.mean[k] = acc.value() / static_cast<double>(N);
  }

  // centered block sums
  const std::size_t G = std::min<std::size_t>(100, N);
  std::vector<std::size_t> bounds(G + 1);
  for (std::size_t g = 0; g <= G; ++g) bounds[g] = g * N / G;
  std::vector<std::vector<double>> bx(G, std::vector<double>(d, 0.0));
  std::vector<std::vector<double>> bxx(G, std::vector<double>(d * d, 0.0));
  for (std::size_t g = 0; g < G; ++g) {
    std::vector<CompensatedSum> sx(d), sxx(d * d);
    for (std::size_t t = bounds[g]; t < bounds[g + 1]; ++t) {
      for (std::size_t i = 0; i < d; ++i) {
        const double xi = s.at(t, i) - r.mean[i];
        sx[i] += xi;
        for (std::size_t j = i; j < d; ++j) sxx[i * d + j] += xi * (s.at(t, j) - r.mean[j]);
      }
    }
    for (std::size_t i = 0; i < d; ++i) {
      bx[g][i] = sx[i].value();
      for (std::size_t j = i; j < d; ++j) bxx[g][i * d + j] = sxx[i * d + j].value();
    }
  }
  std::vector<double> tx(d, 0.0), txx(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    CompensatedSum a;
    for (std::size_t g = 0; g < G; ++g) a += bx[g][i];
    tx[i] = a.value();
    for (std::size_t j = i; j < d; ++j) {
      CompensatedSum b;
      for (std::size_t g = 0; g < G; ++g) b += bxx[g][i * d + j];
      txx[i * d + j] = b.value();
    }
  }
  auto cov_from = [d](const std::vector<double>& sx, const std::vector<double>& sxx, double n, std::size_t i,
                      std::size_t j) {
    return (sxx[i * d + j] - sx[i] * sx[j] / n) / (n - 1.0);
  };

  r.covariance = Matrix(d);
  r.covariance_se = Matrix(d);
  r.mean_se.assign(d, 0.0);
  const double dn = static_cast<double>(N);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      const double full = cov_from(tx, txx, dn, i, j);
      std::vector<double> loo(G);
      CompensatedSum loo_sum;
      for (std::size_t g = 0; g < G; ++g) {
        std::vector<double> rx = tx, rxx = txx;
        rx[i] -= bx[g][i];
        rx[j] = tx[j] - bx[g][j];
        rxx[i * d + j] -= bxx[g][i * d + j];
        const double m = dn - static_cast<double>(bounds[g + 1] - bounds[g]);
        loo[g] = cov_from(rx, rxx, m, i, j);
        loo_sum += loo[g];
      }
      const double loo_mean = loo_sum.value() / static_cast<double>(G);
      CompensatedSum spread;
      for (double v : loo) spread += (v - loo_mean) * (v - loo_mean);
      const double se = std::sqrt(static_cast<double>(G - 1) / static_cast<double>(G) * spread.value());
      r.covariance(i, j) = r.covariance(j, i) = full;
      r.covariance_se(i, j) = r.covariance_se(j, i) = se;
    }
    r.mean_se[i] = std::sqrt(std::max(r.covariance(i, i), 0.0) / dn);
  }

  auto dev = [](double diff, double se) {
    if (diff == 0.0) return 0.0;
    return se > 0.0 ? std::abs(diff) / se : std::numeric_limits<double>::infinity();
  };
  for (std::size_t i = 0; i < d; ++i) {
    r.max_mean_dev_se = std::max(r.max_mean_dev_se, dev(r.mean[i], r.mean_se[i]));
    for (std::size_t j = i; j < d; ++j)
      r.max_cov_dev_se =
          std::max(r.max_cov_dev_se, dev(r.covariance(i, j) - theory(i, j), r.covariance_se(i, j)));
    r.ks.push_back(ks_statistic_normal(s.marginal(i), std::sqrt(std::max(theory(i, i), 0.0))));
    r.max_ks = std::max(r.max_ks, r.ks.back());
  }
  return r;
}

//---------------------------------------------------------------------------//
// Chi-square tests
//---------------------------------------------------------------------------//

struct ChiSquareResult {
  double statistic = 0.0;
  std::size_t dof = 0;
  double p_value = 1.0;
};

inline double chi_square_survival(double stat, std::size_t dof) {
  if (dof == 0) return 1.0;
  return boost::math::gamma_q(static_cast<double>(dof) / 2.0, stat / 2.0);
}

/// Pearson goodness of fit of `observed` counts against `probabilities`.
/// Cells whose expected count is below `min_expected` are pooled into one.
inline ChiSquareResult chi_square_goodness(std::span<const std::int64_t> observed,
                                           std::span<const double> probabilities, double min_expected = 0.0) {
  if (observed.size() != probabilities.size()) throw std::invalid_argument("size mismatch");
  double n = 0.0;
  for (auto o : observed) n += static_cast<double>(o);
  ChiSquareResult r;
  std::size_t cells = 0;
  double pooled_o = 0.0, pooled_e = 0.0;
  auto add = [&](double o, double e) {
    r.statistic += (o - e) * (o - e) / e;
    ++cells;
  };
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = n * probabilities[i];
    const auto o = static_cast<double>(observed[i]);
    if (e < min_expected || e <= 0.0) {
      pooled_o += o;
      pooled_e += e;
      continue;
    }
    add(o, e);
  }
  if (pooled_e > 0.0) add(pooled_o, pooled_e);
  r.dof = cells > 0 ? cells - 1 : 0;
  r.p_value = chi_square_survival(r.statistic, r.dof);
  return r;
}

/// Two-sample chi-square test of homogeneity for integer-valued samples.
/// Adjacent values are pooled until every expected count is at least
/// `min_expected`.
inline ChiSquareResult chi_square_homogeneity(std::span<const std::int64_t> a, std::span<const std::int64_t> b,
                                              double min_expected = 5.0) {
  if (a.empty() || b.empty()) throw std::invalid_argument("empty sample");
  std::int64_t lo = std::min(*std::min_element(a.begin(), a.end()), *std::min_element(b.begin(), b.end()));
  std::int64_t hi = std::max(*std::max_element(a.begin(), a.end()), *std::max_element(b.begin(), b.end()));
  const auto width = static_cast<std::size_t>(hi - lo + 1);
  std::vector<double> ca(width, 0.0), cb(width, 0.0);
  for (auto v : a) ca[static_cast<std::size_t>(v - lo)] += 1.0;
  for (auto v : b) cb[static_cast<std::size_t>(v - lo)] += 1.0;
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size()), n = na + nb;

  std::vector<std::pair<double, double>> bins;
  double pa = 0.0, pb = 0.0;
  for (std::size_t i = 0; i < width; ++i) {
    pa += ca[i];
    pb += cb[i];
    const double tot = pa + pb;
    if (tot * na / n >= min_expected && tot * nb / n >= min_expected) {
      bins.emplace_back(pa, pb);
      pa = pb = 0.0;
    }
  }
  if (pa + pb > 0.0) {
    if (bins.empty())
      bins.emplace_back(pa, pb);
    else {
      bins.back().first += pa;
      bins.back().second += pb;
    }
  }
  ChiSquareResult r;
  for (const auto& [oa, ob] : bins) {
    const double tot = oa + ob;
    const double ea = tot * na / n, eb = tot * nb / n;
    r.statistic += (oa - ea) * (oa - ea) / ea + (ob - eb) * (ob - eb) / eb;
  }
  r.dof = bins.size() > 0 ? bins.size() - 1 : 0;
  r.p_value = chi_square_survival(r.statistic, r.dof);
  return r;
}

//---------------------------------------------------------------------------//
// Per-trial kernels
//---------------------------------------------------------------------------//

struct TrialShape {
  YoungDiagram shape;
  LetterCounts counts;
};

/// Samples one word (length n, or Poisson(ν) when `nu` > 0), inserts it, and
/// checks that rows and letters both add up to the word length.
inline TrialShape run_one_trial(const ThomaParams& p, const LetterSampler& sampler, const LinearOrder& order,
                                std::size_t n, double nu, RngStream& rng) {
  const std::size_t len = nu > 0.0 ? static_cast<std::size_t>(rng.poisson(nu)) : n;
  RowInserter ins(order);
  LetterCounts counts;
  counts.rows.assign(p.num_alphas(), 0);
  counts.cols.assign(p.num_betas(), 0);
  for (std::size_t i = 0; i < len; ++i) {
    Letter l = sampler.draw(rng);
    counts.add(l);
    ins.insert(l);
  }
  TrialShape out{ins.shape(), std::move(counts)};
  if (out.shape.size() != static_cast<int>(len) || out.counts.total() != static_cast<std::int64_t>(len))
    throw std::logic_error("coupling violated: rows or letter counts do not add up");
  return out;
}

struct RunOptions {
  std::size_t trials = 0;
  unsigned workers = 1;
  SeededGenerator gen{};
};

inline std::uint64_t keyed_experiment(Experiment e, std::uint64_t sub) {
  return (static_cast<std::uint64_t>(e) << 40) ^ sub;
}

//---------------------------------------------------------------------------//
// Central limit theorem
//---------------------------------------------------------------------------//

struct CltResult {
  FluctuationSample sample;
  CovarianceReport report;
};

namespace detail {

inline CltResult fluctuation_run(const ThomaParams& p, std::size_t K, std::size_t L, std::size_t n, double nu,
                                 const LinearOrder& order, const RunOptions& opt, Experiment exp,
                                 const Matrix& theory) {
  const LetterSampler sampler(p);
  const std::size_t d = K + L;
  auto per_trial = run_trials<std::vector<double>>(opt.trials, opt.workers, [&](std::size_t t) {
    RngStream rng = opt.gen.stream(exp, t);
    TrialShape ts = run_one_trial(p, sampler, order, n, nu, rng);
    const double scale = nu > 0.0 ? nu : static_cast<double>(n);
    const double root = std::sqrt(scale);
    std::vector<double> v(d);
    for (std::size_t i = 1; i <= K; ++i) v[i - 1] = (ts.shape.row(i) - p.alpha(i) * scale) / root;
    for (std::size_t j = 1; j <= L; ++j) v[K + j - 1] = (ts.shape.col(j) - p.beta(j) * scale) / root;
    return v;
  });
  CltResult out;
  out.sample.dim = d;
  out.sample.trials = opt.trials;
  out.sample.values.reserve(d * opt.trials);
  for (const auto& v : per_trial) out.sample.values.insert(out.sample.values.end(), v.begin(), v.end());
  if (opt.trials >= 2) out.report = covariance_report(out.sample, theory);
  return out;
}

}  // namespace detail

/// ((λ_i − α_i n)/√n, (λ'_j − β_j n)/√n) over `opt.trials` words of length n,
/// compared with theoretical_covariance.
inline CltResult run_clt(const ThomaParams& p, std::size_t K, std::size_t L, std::size_t n,
                         const LinearOrder& order, const RunOptions& opt) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  Matrix theory = theoretical_covariance(p, K, L);
  return detail::fluctuation_run(p, K, L, n, 0.0, order, opt, Experiment::Clt, theory);
}

/// Poissonized fluctuations ((λ̃_i − α_i ν)/√ν, ...) against the independent
/// limit diag(α_1..α_K, β_1..β_L).
inline CltResult run_clt_poisson(const ThomaParams& p, std::size_t K, std::size_t L, double nu,
                                 const LinearOrder& order, const RunOptions& opt) {
  if (!(nu > 0.0)) throw std::invalid_argument("nu must be positive");
  if (!p.strictly_monotone_up_to(K, L))
    throw std::invalid_argument("requested rows/columns need strictly decreasing masses");
  Matrix theory(K + L);
  for (std::size_t i = 1; i <= K; ++i) theory(i - 1, i - 1) = p.alpha(i);
  for (std::size_t j = 1; j <= L; ++j) theory(K + j - 1, K + j - 1) = p.beta(j);
  return detail::fluctuation_run(p, K, L, 0, nu, order, opt, Experiment::Poisson, theory);
}

//---------------------------------------------------------------------------//
// Drift
//---------------------------------------------------------------------------//

/// ε_i = λ_i − N_{x_i} (i ≤ K) then ε'_j = λ'_j − N_{y_j} (j ≤ L), per trial,
/// all from the same word.
struct DriftSample {
  std::size_t dim = 0;
  std::vector<std::vector<std::int64_t>> trials;

  std::vector<std::int64_t> coordinate(std::size_t k) const {
    std::vector<std::int64_t> out;
    out.reserve(trials.size());
    for (const auto& t : trials) out.push_back(t[k]);
    return out;
  }
};

inline DriftSample drift_sample(const ThomaParams& p, std::size_t K, std::size_t L, std::size_t n, double nu,
                                const LinearOrder& order, const RunOptions& opt, std::uint64_t experiment) {
  const LetterSampler sampler(p);
  DriftSample out;
  out.dim = K + L;
  out.trials = run_trials<std::vector<std::int64_t>>(opt.trials, opt.workers, [&](std::size_t t) {
    RngStream rng = opt.gen.stream(experiment, t);
    TrialShape ts = run_one_trial(p, sampler, order, n, nu, rng);
    std::vector<std::int64_t> e(K + L);
    for (std::size_t i = 1; i <= K; ++i) e[i - 1] = ts.shape.row(i) - ts.counts.row(i);
    for (std::size_t j = 1; j <= L; ++j) e[K + j - 1] = ts.shape.col(j) - ts.counts.col(j);
    return e;
  });
  return out;
}

struct DriftRow {
  double size = 0.0;  // n, or ν for the poissonized run
  std::vector<double> mean_abs;
  std::vector<double> se;
};

struct DriftReport {
  std::vector<DriftRow> rows;
  /// max over the grid of E|ε| divided by its value at the smallest size
  std::vector<double> growth_ratio;
  /// E|ε| at the largest size ≤ value at the smallest + 5·combined SE + 0.5
  std::vector<bool> within_band;
  bool all_within_band() const {
    return std::all_of(within_band.begin(), within_band.end(), [](bool b) { return b; });
  }
};

inline constexpr double kDriftBandSe = 5.0;
inline constexpr double kDriftBandSlack = 0.5;

namespace detail {

inline DriftReport drift_report(const std::vector<DriftRow>& rows, std::size_t d) {
  DriftReport r;
  r.rows = rows;
  if (rows.empty()) return r;
  for (std::size_t k = 0; k < d; ++k) {
    const double first = rows.front().mean_abs[k];
    double mx = first;
    for (const auto& row : rows) mx = std::max(mx, row.mean_abs[k]);
    r.growth_ratio.push_back(first > 0.0 ? mx / first : (mx == 0.0 ? 1.0 : std::numeric_limits<double>::infinity()));
    const double se = std::hypot(rows.front().se[k], rows.back().se[k]);
    r.within_band.push_back(rows.back().mean_abs[k] <= first + kDriftBandSe * se + kDriftBandSlack);
  }
  return r;
}

inline DriftRow summarize_drift(const DriftSample& s, double size) {
  DriftRow row;
  row.size = size;
  const double N = static_cast<double>(s.trials.size());
  for (std::size_t k = 0; k < s.dim; ++k) {
    CompensatedSum m, m2;
    for (const auto& t : s.trials) {
      const double a = std::abs(static_cast<double>(t[k]));
      m += a;
    }
    const double mean = N > 0 ? m.value() / N : 0.0;
    for (const auto& t : s.trials) {
      const double a = std::abs(static_cast<double>(t[k])) - mean;
      m2 += a * a;
    }
    row.mean_abs.push_back(mean);
    row.se.push_back(N > 1 ? std::sqrt(m2.value() / (N - 1.0) / N) : 0.0);
  }
  return row;
}

}  // namespace detail

/// E|ε_i(n)|, E|ε'_j(n)| across an increasing grid of n.
inline DriftReport run_drift(const ThomaParams& p, std::size_t K, std::size_t L, const std::vector<std::size_t>& grid,
                             const LinearOrder& order, const RunOptions& opt) {
  if (!std::is_sorted(grid.begin(), grid.end())) throw std::invalid_argument("n grid must be increasing");
  if (K > p.num_alphas() || L > p.num_betas()) throw std::invalid_argument("K or L exceeds the parameters");
  std::vector<DriftRow> rows;
  for (std::size_t n : grid) {
    auto s = drift_sample(p, K, L, n, 0.0, order, opt, keyed_experiment(Experiment::Drift, n));
    rows.push_back(detail::summarize_drift(s, static_cast<double>(n)));
  }
  return detail::drift_report(rows, K + L);
}

/// The poissonized drift λ̃_i(ν) − Ñ_{x_i}(ν) across a grid of ν.
inline DriftReport run_drift_poisson(const ThomaParams& p, std::size_t K, std::size_t L,
                                     const std::vector<double>& grid, const LinearOrder& order,
                                     const RunOptions& opt) {
  if (!std::is_sorted(grid.begin(), grid.end())) throw std::invalid_argument("nu grid must be increasing");
  if (K > p.num_alphas() || L > p.num_betas()) throw std::invalid_argument("K or L exceeds the parameters");
  std::vector<DriftRow> rows;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    auto s = drift_sample(p, K, L, 0, grid[g], order, opt, keyed_experiment(Experiment::PoissonDrift, g));
    rows.push_back(detail::summarize_drift(s, grid[g]));
  }
  return detail::drift_report(rows, K + L);
}

/// Two-sample tests that each ε_k has the same law under two orders, one per
/// coordinate. The two samples use independent streams.
inline std::vector<ChiSquareResult> drift_order_independence(const ThomaParams& p, std::size_t K, std::size_t L,
                                                             std::size_t n, const LinearOrder& first,
                                                             const LinearOrder& second, const RunOptions& opt) {
  if (K > p.num_alphas() || L > p.num_betas()) throw std::invalid_argument("K or L exceeds the parameters");
  auto a = drift_sample(p, K, L, n, 0.0, first, opt, keyed_experiment(Experiment::OrderIndependence, 0));
  auto b = drift_sample(p, K, L, n, 0.0, second, opt, keyed_experiment(Experiment::OrderIndependence, 1));
  std::vector<ChiSquareResult> out;
  for (std::size_t k = 0; k < K + L; ++k) {
    auto ca = a.coordinate(k), cb = b.coordinate(k);
    out.push_back(chi_square_homogeneity(ca, cb));
  }
  return out;
}

//---------------------------------------------------------------------------//
// Law of large numbers
//---------------------------------------------------------------------------//

struct LlnRow {
  std::size_t n = 0;
  std::vector<double> mean;  // λ_1/n..λ_K/n, λ'_1/n..λ'_L/n
  std::vector<double> se;
};

inline std::vector<LlnRow> run_lln(const ThomaParams& p, std::size_t K, std::size_t L,
                                   const std::vector<std::size_t>& grid, const LinearOrder& order,
                                   const RunOptions& opt) {
  const LetterSampler sampler(p);
  std::vector<LlnRow> out;
  for (std::size_t n : grid) {
    if (n == 0) throw std::invalid_argument("n must be positive");
    auto per = run_trials<std::vector<double>>(opt.trials, opt.workers, [&](std::size_t t) {
      RngStream rng = opt.gen.stream(keyed_experiment(Experiment::Lln, n), t);
      TrialShape ts = run_one_trial(p, sampler, order, n, 0.0, rng);
      std::vector<double> v(K + L);
      for (std::size_t i = 1; i <= K; ++i) v[i - 1] = ts.shape.row(i) / static_cast<double>(n);
      for (std::size_t j = 1; j <= L; ++j) v[K + j - 1] = ts.shape.col(j) / static_cast<double>(n);
      return v;
    });
    LlnRow row;
    row.n = n;
    const double N = static_cast<double>(per.size());
    for (std::size_t k = 0; k < K + L; ++k) {
      CompensatedSum m, m2;
      for (const auto& v : per) m += v[k];
      const double mean = N > 0 ? m.value() / N : 0.0;
      for (const auto& v : per) m2 += (v[k] - mean) * (v[k] - mean);
      row.mean.push_back(mean);
      row.se.push_back(N > 1 ? std::sqrt(m2.value() / (N - 1.0) / N) : 0.0);
    }
    out.push_back(std::move(row));
  }
  return out;
}

//---------------------------------------------------------------------------//
// Coupled checks at scale
//---------------------------------------------------------------------------//

/// The word with x_i and y_i exchanged; under P it is a μ_n-word for P^t.
inline Word swap_row_col_letters(std::span<const Letter> word) {
  Word out(word.begin(), word.end());
  for (auto& l : out) {
    if (l.kind == LetterKind::Row)
      l.kind = LetterKind::Col;
    else if (l.kind == LetterKind::Col)
      l.kind = LetterKind::Row;
  }
  return out;
}

/// The transposed order of `order`, written on the alphabet of P^t (x and y
/// exchanged), so its row letters are again L_e.
inline LinearOrder transposed_order_on_swapped_alphabet(const LinearOrder& order) {
  LinearOrder t = order.transposed();
  std::vector<Segment> segs = t.segments();
  for (auto& s : segs) {
    if (s.continuous) continue;
    s.letter.kind = s.letter.kind == LetterKind::Row ? LetterKind::Col : LetterKind::Row;
  }
  return LinearOrder(std::move(segs), order.num_cols(), order.num_rows(), t.continuous_reversed());
}

/// Trials in which the row fluctuations of P^t (on the swapped word, under
/// the transposed order) differ from the column fluctuations of P.
inline std::size_t mirror_mismatches(const ThomaParams& p, std::size_t K, std::size_t L, std::size_t n,
                                     const LinearOrder& order, const RunOptions& opt) {
  const LetterSampler sampler(p);
  const ThomaParams pt = p.transposed();
  const LinearOrder ot = transposed_order_on_swapped_alphabet(order);
  const double root = std::sqrt(static_cast<double>(n));
  auto bad = run_trials<char>(opt.trials, opt.workers, [&](std::size_t t) -> char {
    RngStream rng = opt.gen.stream(Experiment::Clt, t);
    Word w = sample_word(sampler, n, rng);
    YoungDiagram lam = rsk_shape(w, order);
    YoungDiagram mu = rsk_shape(swap_row_col_letters(w), ot);
    for (std::size_t j = 1; j <= L; ++j)
      if ((mu.row(j) - pt.alpha(j) * n) / root != (lam.col(j) - p.beta(j) * n) / root) return 1;
    for (std::size_t i = 1; i <= K; ++i)
      if ((mu.col(i) - pt.beta(i) * n) / root != (lam.row(i) - p.alpha(i) * n) / root) return 1;
    return 0;
  });
  return static_cast<std::size_t>(std::count(bad.begin(), bad.end(), 1));
}

/// Trials where some partial row sum k ≤ kmax of φ_p(w) exceeds that of the
/// amalgamated word.
template <class MapWord>
std::size_t dominance_violations(const ThomaParams& p, const LinearOrder& order, const LinearOrder& amalgamated_order,
                                 MapWord&& map_word, std::size_t n, std::size_t kmax, const RunOptions& opt) {
  const LetterSampler sampler(p);
  auto bad = run_trials<char>(opt.trials, opt.workers, [&](std::size_t t) -> char {
    RngStream rng = opt.gen.stream(Experiment::Dominance, t);
    Word w = sample_word(sampler, n, rng);
    YoungDiagram lam = rsk_shape(w, order);
    YoungDiagram star = rsk_shape(map_word(w), amalgamated_order);
    for (std::size_t k = 1; k <= kmax; ++k)
      if (lam.row_prefix_sum(k) > star.row_prefix_sum(k)) return 1;
    return 0;
  });
  return static_cast<std::size_t>(std::count(bad.begin(), bad.end(), 1));
}

/// Dominance for the reduction of P (under x_1 < ... < y_1 < ... < G) to a
/// finite alphabet keeping α_1..α_K.
inline std::size_t reduction_dominance_violations(const ThomaParams& p, std::size_t K, std::size_t n,
                                                  std::size_t kmax, const RunOptions& opt) {
  Reduction red = reduce_to_finite(p, K);
  return dominance_violations(
      p, LinearOrder::standard(p), red.order, [&red](const Word& w) { return red.map_word(w); }, n, kmax, opt);
}

/// Trials where φ_p(w) differs from the transpose of the transposed map.
inline std::size_t transpose_identity_failures(const ThomaParams& p, std::size_t n, const LinearOrder& order,
                                               const RunOptions& opt) {
  const LetterSampler sampler(p);
  const LinearOrder ot = order.transposed();
  auto bad = run_trials<char>(opt.trials, opt.workers, [&](std::size_t t) -> char {
    RngStream rng = opt.gen.stream(Experiment::Transpose, t);
    Word w = sample_word(sampler, n, rng);
    return rsk_shape(w, order) == rsk_shape(w, ot).transpose() ? 0 : 1;
  });
  return static_cast<std::size_t>(std::count(bad.begin(), bad.end(), 1));
}

}  // namespace thoma
