#pragma once

// Random words under μ_n and its poissonization, per-trial RNG streams, and
// amalgamation of alphabet intervals into a single new L_e letter.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "thoma_rsk/core.hpp"

namespace thoma {

//---------------------------------------------------------------------------//
// Random streams
//---------------------------------------------------------------------------//

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// Experiment identifiers used to key per-trial streams.
enum class Experiment : std::uint64_t {
  Sample = 1,
  Clt = 2,
  Drift = 3,
  Lln = 4,
  Poisson = 5,
  PoissonDrift = 6,
  Dominance = 7,
  Transpose = 8,
  PossibleTransformation = 9,
  Walk = 10,
  OrderIndependence = 11,
  ConditionalGaussian = 12,
  Bijection = 13,
};

/// One trial's random source. Wraps mt19937_64 and derives doubles from the
/// raw 64-bit output so streams are identical across standard libraries.
class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(std::uint64_t key) : engine_(key) {}

  static constexpr result_type min() noexcept { return std::mt19937_64::min(); }
  static constexpr result_type max() noexcept { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform on [0,1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::int64_t poisson(double nu) {
    std::poisson_distribution<std::int64_t> dist(nu);
    return dist(engine_);
  }

  double normal() {
    std::normal_distribution<double> dist;
    return dist(engine_);
  }

 private:
  std::mt19937_64 engine_;
};

/// Master seed from which every (experiment, trial) stream is derived by
/// keyed hashing; streams never depend on scheduling.
class SeededGenerator {
 public:
  explicit SeededGenerator(std::uint64_t seed = 0) : seed_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  RngStream stream(std::uint64_t experiment, std::uint64_t trial) const {
    std::uint64_t h = splitmix64(seed_);
    h = splitmix64(h ^ splitmix64(experiment + 0x5bd1e995ull));
    h = splitmix64(h ^ trial);
    return RngStream(h);
  }
  RngStream stream(Experiment e, std::uint64_t trial) const {
    return stream(static_cast<std::uint64_t>(e), trial);
  }

 private:
  std::uint64_t seed_;
};

//---------------------------------------------------------------------------//
// Word sampling
//---------------------------------------------------------------------------//

/// Draws letters from μ_1 by inverse transform: one uniform per letter picks
/// the discrete letter or, inside the G band, the position in G.
class LetterSampler {
 public:
  explicit LetterSampler(const ThomaParams& p) {
    double acc = 0.0;
    for (std::uint32_t i = 1; i <= p.num_alphas(); ++i) {
      acc += p.alpha(i);
      cumulative_.push_back(acc);
      letters_.push_back(Letter::row(i));
    }
    for (std::uint32_t j = 1; j <= p.num_betas(); ++j) {
      acc += p.beta(j);
      cumulative_.push_back(acc);
      letters_.push_back(Letter::col(j));
    }
    discrete_mass_ = acc;
    gamma_ = p.gamma();
  }

  Letter draw(RngStream& rng) const {
    double u = rng.uniform();
    if (u < discrete_mass_ || gamma_ <= 0.0) {
      auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
      if (it == cumulative_.end()) --it;
      return letters_[static_cast<std::size_t>(it - cumulative_.begin())];
    }
    double v = (u - discrete_mass_) / gamma_;
    return Letter::cont(std::clamp(v, 0.0, std::nextafter(1.0, 0.0)));
  }

 private:
  std::vector<double> cumulative_;
  std::vector<Letter> letters_;
  double discrete_mass_ = 0.0;
  double gamma_ = 0.0;
};

inline Word sample_word(const LetterSampler& sampler, std::size_t n, RngStream& rng) {
  Word w(n);
  for (auto& l : w) l = sampler.draw(rng);
  return w;
}

/// n i.i.d. letters from μ_1.
inline Word sample_word(const ThomaParams& p, std::size_t n, RngStream& rng) {
  return sample_word(LetterSampler(p), n, rng);
}

/// A word whose length is Poisson(ν) and whose letters are i.i.d. μ_1.
inline Word sample_word_poisson(const ThomaParams& p, double nu, RngStream& rng) {
  if (!(nu > 0.0)) throw std::invalid_argument("nu must be positive");
  auto len = static_cast<std::size_t>(rng.poisson(nu));
  return sample_word(p, len, rng);
}

//---------------------------------------------------------------------------//
// Amalgamation
//---------------------------------------------------------------------------//

/// A contiguous range of segments [first, last] of a reference order. When
/// the range contains G, only the part [g_lo, g_hi) of G is taken; that part
/// must sit at the end of G adjacent to the rest of the range.
struct AmalgamationSpec {
  std::size_t first = 0;
  std::size_t last = 0;
  double g_lo = 0.0;
  double g_hi = 1.0;
};

/// Letterwise map from the old alphabet to the amalgamated one.
struct LetterMap {
  std::vector<Letter> rows;  // image of x_i
  std::vector<Letter> cols;  // image of y_j
  bool g_in_range = false;
  double g_lo = 0.0;
  double g_hi = 1.0;
  Letter target{};  // the new letter z

  Letter operator()(const Letter& l) const {
    switch (l.kind) {
      case LetterKind::Row: return rows.at(l.index - 1);
      case LetterKind::Col: return cols.at(l.index - 1);
      case LetterKind::Cont: {
        if (!g_in_range) return l;
        if (l.value >= g_lo && l.value < g_hi) return target;
        // the remaining part of G is rescaled back onto [0,1)
        double v = g_lo == 0.0 ? (l.value - g_hi) / (1.0 - g_hi) : l.value / g_lo;
        return Letter::cont(std::clamp(v, 0.0, std::nextafter(1.0, 0.0)));
      }
    }
    return l;
  }
};

struct Amalgamation {
  ThomaParams params;
  LinearOrder order;
  LetterMap mapping;
};

/// Collapses the interval described by `spec` into a new L_e letter z with
/// μ_1(z) = μ_1(I). Other letters keep their masses and relative order; row
/// letters are renumbered so that the alphas stay weakly decreasing.
/// Throws std::invalid_argument when `spec` is not an interval.
inline Amalgamation amalgamate(const ThomaParams& p, const LinearOrder& order,
                               const AmalgamationSpec& spec) {
  const auto& segs = order.segments();
  if (spec.first > spec.last || spec.last >= segs.size())
    throw std::invalid_argument("amalgamation range outside the order");
  if (order.num_rows() != p.num_alphas() || order.num_cols() != p.num_betas())
    throw std::invalid_argument("order does not match the parameters");

  const std::size_t gpos = order.continuous_rank();
  const bool g_in = gpos >= spec.first && gpos <= spec.last && p.gamma() > 0.0;
  const bool reversed = order.continuous_reversed();
  if (g_in) {
    if (!(spec.g_lo >= 0.0 && spec.g_lo < spec.g_hi && spec.g_hi <= 1.0))
      throw std::invalid_argument("G part must be a nonempty sub-interval of [0,1)");
    const bool takes_low = spec.g_lo == 0.0;   // values near 0
    const bool takes_high = spec.g_hi == 1.0;  // values near 1
    // In order terms, "top of G" means large values unless G is reversed.
    const bool takes_top = reversed ? takes_low : takes_high;
    const bool takes_bottom = reversed ? takes_high : takes_low;
    bool ok;
    if (spec.first == spec.last)
      ok = takes_low || takes_high;
    else if (gpos == spec.first)
      ok = takes_top;
    else if (gpos == spec.last)
      ok = takes_bottom;
    else
      ok = takes_low && takes_high;
    if (!ok) throw std::invalid_argument("amalgamation set is not an interval of the order");
  }
  const double g_taken = g_in ? spec.g_hi - spec.g_lo : 0.0;
  const bool g_whole = g_in && spec.g_lo == 0.0 && spec.g_hi == 1.0;

  auto in_range = [&](std::size_t r) { return r >= spec.first && r <= spec.last; };

  double z_mass = p.gamma() * g_taken;
  std::vector<bool> row_taken(p.num_alphas(), false), col_taken(p.num_betas(), false);
  for (std::size_t r = spec.first; r <= spec.last; ++r) {
    const Segment& s = segs[r];
    if (s.continuous) continue;
    if (s.letter.kind == LetterKind::Row) {
      row_taken[s.letter.index - 1] = true;
      z_mass += p.alpha(s.letter.index);
    } else {
      col_taken[s.letter.index - 1] = true;
      z_mass += p.beta(s.letter.index);
    }
  }

  // new alphas: survivors in their old order with z placed after every
  // survivor of at least its mass
  std::vector<double> alphas;
  std::vector<Letter> row_map(p.num_alphas());
  Letter z{};
  bool z_placed = false;
  auto place_z = [&] {
    alphas.push_back(z_mass);
    z = Letter::row(static_cast<std::uint32_t>(alphas.size()));
    z_placed = true;
  };
  for (std::uint32_t i = 1; i <= p.num_alphas(); ++i) {
    if (row_taken[i - 1]) continue;
    if (!z_placed && p.alpha(i) < z_mass) place_z();
    alphas.push_back(p.alpha(i));
    row_map[i - 1] = Letter::row(static_cast<std::uint32_t>(alphas.size()));
  }
  if (!z_placed) place_z();
  for (std::uint32_t i = 1; i <= p.num_alphas(); ++i)
    if (row_taken[i - 1]) row_map[i - 1] = z;

  std::vector<double> betas;
  std::vector<Letter> col_map(p.num_betas());
  for (std::uint32_t j = 1; j <= p.num_betas(); ++j) {
    if (col_taken[j - 1]) {
      col_map[j - 1] = z;
      continue;
    }
    betas.push_back(p.beta(j));
    col_map[j - 1] = Letter::col(static_cast<std::uint32_t>(betas.size()));
  }
  const double gamma = g_whole ? 0.0 : p.gamma() * (1.0 - g_taken);

  // new order: z replaces the range; a surviving part of G stays on the side
  // of z it occupied
  const bool g_remains = g_in && !g_whole;
  const bool top_taken = reversed ? spec.g_lo == 0.0 : spec.g_hi == 1.0;
  std::vector<Segment> new_segs;
  for (std::size_t r = 0; r < segs.size(); ++r) {
    const Segment& s = segs[r];
    if (!in_range(r)) {
      if (s.continuous)
        new_segs.push_back(s);
      else
        new_segs.push_back(Segment::discrete(
            s.letter.kind == LetterKind::Row ? row_map[s.letter.index - 1] : col_map[s.letter.index - 1],
            s.ties));
      continue;
    }
    if (r != spec.first) continue;
    if (g_remains && top_taken) new_segs.push_back(Segment::block_g());
    new_segs.push_back(Segment::discrete(z, TieClass::Increasing));
    if (g_remains && !top_taken) new_segs.push_back(Segment::block_g());
  }
  // a G block of zero mass (or swallowed whole) still needs a place
  if (std::none_of(new_segs.begin(), new_segs.end(), [](const Segment& s) { return s.continuous; }))
    new_segs.push_back(Segment::block_g());

  LetterMap mapping{std::move(row_map), std::move(col_map), g_in, g_whole ? 0.0 : spec.g_lo,
                    g_whole ? 1.0 : spec.g_hi, z};
  Amalgamation out{ThomaParams::make(alphas, betas, std::max(gamma, 0.0)),
                   LinearOrder(std::move(new_segs), alphas.size(), betas.size(), reversed),
                   std::move(mapping)};
  return out;
}

/// Letterwise image of `word`; realizes φ*_p on the same probability space.
inline Word amalgamate_word(std::span<const Letter> word, const LetterMap& mapping) {
  Word out;
  out.reserve(word.size());
  for (const Letter& l : word) out.push_back(mapping(l));
  return out;
}

//---------------------------------------------------------------------------//
// Reduction to a finite alphabet without G
//---------------------------------------------------------------------------//

/// A sequence of amalgamations turning (P, p1) into finitely many distinct
/// alpha/beta masses and no G while keeping alpha_1..alpha_K.
struct Reduction {
  std::vector<Amalgamation> stages;
  std::vector<std::string> notes;
  ThomaParams params;
  LinearOrder order;

  Letter map(const Letter& l) const {
    Letter out = l;
    for (const auto& s : stages) out = s.mapping(out);
    return out;
  }
  Word map_word(std::span<const Letter> word) const {
    Word out(word.begin(), word.end());
    for (const auto& s : stages)
      for (auto& l : out) l = s.mapping(l);
    return out;
  }
};

namespace detail {

inline constexpr double kTieTolerance = 1e-12;

inline double tail_sum(const std::vector<double>& v, std::size_t from) {
  double s = 0.0;
  for (std::size_t i = v.size(); i-- > from;) s += v[i];
  return s;
}

inline std::size_t find_segment(const LinearOrder& order, const Letter& l) {
  const auto& segs = order.segments();
  for (std::size_t r = 0; r < segs.size(); ++r)
    if (!segs[r].continuous && segs[r].letter == l) return r;
  throw std::logic_error("letter not found in order");
}

}  // namespace detail

/// Builds the reduction for the order x_1 < x_2 < ... < y_1 < y_2 < ... < G.
///
/// Alphas: the smallest l ≥ K with Σ_{i>l} α_i < α_K and Σ_{i>l} α_i ≠ α_r
/// for every r; failing that, the smallest (l_1, m_1) with
/// Σ_{i>l_1} α_i = α_r < α_K (r ≤ l_1), α_r > Σ_{l_1<i≤l_1+m_1} α_i > α_{r+1}
/// and Σ_{i>l_1+m_1} α_i < α_{l_1}. A list where neither applies is kept.
/// Betas: the smallest l_2 with Σ_{j>l_2} β_j < min α. G: the smallest m with
/// γ/m < min α, cut into pieces γ/m + δ_k with δ_1 > ... > δ_m summing to 0.
/// Throws std::invalid_argument unless 1 ≤ K ≤ #alphas.
inline Reduction reduce_to_finite(const ThomaParams& p, std::size_t K, std::size_t search_bound = 64) {
  if (K < 1 || K > p.num_alphas()) throw std::invalid_argument("reduction needs 1 <= K <= #alphas");
  Reduction red;
  red.params = p;
  red.order = LinearOrder::standard(p);

  auto apply = [&red](const AmalgamationSpec& spec, std::string note) {
    red.stages.push_back(amalgamate(red.params, red.order, spec));
    red.params = red.stages.back().params;
    red.order = red.stages.back().order;
    red.notes.push_back(std::move(note));
  };
  auto amalgamate_rows = [&](std::size_t from, std::size_t to, std::string note) {
    // original x_from..x_to; earlier stages keep them contiguous
    AmalgamationSpec spec;
    spec.first = detail::find_segment(red.order, red.map(Letter::row(static_cast<std::uint32_t>(from))));
    spec.last = detail::find_segment(red.order, red.map(Letter::row(static_cast<std::uint32_t>(to))));
    apply(spec, std::move(note));
  };

  // Step 1: alpha tails.
  {
    const auto& a = p.alphas();
    const std::size_t A = a.size();
    const double aK = a[K - 1];
    auto equals_some_alpha = [&](double s) {
      return std::any_of(a.begin(), a.end(), [s](double x) { return std::abs(x - s) <= detail::kTieTolerance; });
    };
    std::optional<std::size_t> l;
    for (std::size_t cand = K; cand + 1 < A && !l; ++cand) {
      double t = detail::tail_sum(a, cand);
      if (t < aK && !equals_some_alpha(t)) l = cand;
    }
    if (l) {
      amalgamate_rows(*l + 1, A, "alpha tail from x" + std::to_string(*l + 1));
    } else {
      bool done = false;
      for (std::size_t l1 = 1; l1 < A && l1 <= search_bound && !done; ++l1) {
        const double t1 = detail::tail_sum(a, l1);
        for (std::size_t r = 1; r <= l1 && !done; ++r) {
          if (std::abs(t1 - a[r - 1]) > detail::kTieTolerance || !(a[r - 1] < aK)) continue;
          const double next = r < A ? a[r] : 0.0;
          for (std::size_t m1 = 1; l1 + m1 <= A && m1 <= search_bound && !done; ++m1) {
            double block = 0.0;
            for (std::size_t i = l1; i < l1 + m1; ++i) block += a[i];
            if (!(a[r - 1] > block && block > next)) continue;
            if (!(detail::tail_sum(a, l1 + m1) < a[l1 - 1])) continue;
            amalgamate_rows(l1 + 1, l1 + m1, "alpha block x" + std::to_string(l1 + 1) + "..x" +
                                                 std::to_string(l1 + m1));
            if (l1 + m1 < A) amalgamate_rows(l1 + m1 + 1, A, "alpha tail after block");
            done = true;
          }
        }
      }
    }
  }

  // Step 2: beta tail.
  if (red.params.num_betas() > 0) {
    const double amin = red.params.alphas().back();
    const auto& b = red.params.betas();
    const std::size_t B = b.size();
    for (std::size_t l2 = 0; l2 < B; ++l2) {
      if (detail::tail_sum(b, l2) < amin) {
        AmalgamationSpec spec;
        spec.first = detail::find_segment(red.order, Letter::col(static_cast<std::uint32_t>(l2 + 1)));
        spec.last = detail::find_segment(red.order, Letter::col(static_cast<std::uint32_t>(B)));
        apply(spec, "beta tail from y" + std::to_string(l2 + 1));
        break;
      }
    }
  }

  // Step 3: slice G.
  if (red.params.gamma() > 0.0) {
    const double amin = red.params.alphas().back();
    const double g = red.params.gamma();
    std::size_t m = 1;
    while (!(g / static_cast<double>(m) < amin)) {
      if (++m > 100000) throw std::runtime_error("no admissible slicing of G");
    }
    const double base = g / static_cast<double>(m);
    const double h = std::min(amin - base, base) / static_cast<double>(m);
    std::vector<double> pieces(m);
    for (std::size_t k = 1; k <= m; ++k)
      pieces[k - 1] = base + h * ((static_cast<double>(m) + 1.0) / 2.0 - static_cast<double>(k));
    double remaining = g;
    for (std::size_t k = 0; k < m; ++k) {
      AmalgamationSpec spec;
      spec.first = spec.last = red.order.continuous_rank();
      spec.g_lo = 0.0;
      spec.g_hi = k + 1 == m ? 1.0 : std::min(pieces[k] / remaining, 1.0);
      remaining -= pieces[k];
      apply(spec, "G slice " + std::to_string(k + 1) + "/" + std::to_string(m));
    }
  }
  return red;
}

}  // namespace thoma
