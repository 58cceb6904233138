#pragma once

// Domain types: Thoma parameters, letters of the alphabet L_e ∪ L_o ∪ G,
// linear orders on that alphabet, words, Young diagrams and tableaux.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdio>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace thoma {

inline constexpr double kMassTolerance = 1e-12;

//---------------------------------------------------------------------------//
// ThomaParams
//---------------------------------------------------------------------------//

/// A point (alpha, beta, gamma) of the Thoma simplex with zero masses removed.
class ThomaParams {
 public:
  ThomaParams() : gamma_(1.0) {}

  /// Validates and normalizes raw masses. Throws std::invalid_argument when a
  /// mass is negative, a sequence increases, or the total differs from 1.
  static ThomaParams make(std::vector<double> alphas, std::vector<double> betas,
                          double gamma) {
    auto check_sequence = [](const std::vector<double>& seq, const char* name) {
      for (std::size_t i = 0; i < seq.size(); ++i) {
        if (!std::isfinite(seq[i]) || seq[i] < 0.0)
          throw std::invalid_argument(std::string(name) + " must be finite and nonnegative");
        if (seq[i] > 1.0 + kMassTolerance)
          throw std::invalid_argument(std::string(name) + " entries must not exceed 1");
        if (i > 0 && seq[i] > seq[i - 1])
          throw std::invalid_argument(std::string(name) + " must be weakly decreasing");
      }
    };
    check_sequence(alphas, "alphas");
    check_sequence(betas, "betas");
    if (!std::isfinite(gamma) || gamma < 0.0 || gamma > 1.0 + kMassTolerance)
      throw std::invalid_argument("gamma must lie in [0,1]");

    double total = gamma;
    for (double a : alphas) total += a;
    for (double b : betas) total += b;
    if (std::abs(total - 1.0) > kMassTolerance)
      throw std::invalid_argument("total mass " + std::to_string(total) + " differs from 1");

    std::erase(alphas, 0.0);
    std::erase(betas, 0.0);
    ThomaParams p;
    p.alphas_ = std::move(alphas);
    p.betas_ = std::move(betas);
    p.gamma_ = gamma;
    return p;
  }

  const std::vector<double>& alphas() const noexcept { return alphas_; }
  const std::vector<double>& betas() const noexcept { return betas_; }
  double gamma() const noexcept { return gamma_; }
  std::size_t num_alphas() const noexcept { return alphas_.size(); }
  std::size_t num_betas() const noexcept { return betas_.size(); }

  /// 1-based accessors returning 0 beyond the stored masses.
  double alpha(std::size_t i) const noexcept { return i >= 1 && i <= alphas_.size() ? alphas_[i - 1] : 0.0; }
  double beta(std::size_t j) const noexcept { return j >= 1 && j <= betas_.size() ? betas_[j - 1] : 0.0; }

  /// All stored alphas pairwise distinct and all stored betas pairwise distinct.
  bool strictly_monotone() const noexcept {
    return strictly_decreasing_prefix(alphas_, alphas_.size()) &&
           strictly_decreasing_prefix(betas_, betas_.size());
  }

  /// alpha_1 > ... > alpha_K > 0 and beta_1 > ... > beta_L > 0.
  bool strictly_monotone_up_to(std::size_t k, std::size_t l) const noexcept {
    return k <= alphas_.size() && l <= betas_.size() &&
           strictly_decreasing_prefix(alphas_, k) && strictly_decreasing_prefix(betas_, l);
  }

  /// The parameters with the roles of alphas and betas exchanged.
  ThomaParams transposed() const {
    ThomaParams p;
    p.alphas_ = betas_;
    p.betas_ = alphas_;
    p.gamma_ = gamma_;
    return p;
  }

  friend bool operator==(const ThomaParams&, const ThomaParams&) = default;

 private:
  static bool strictly_decreasing_prefix(const std::vector<double>& v, std::size_t k) noexcept {
    // the k-th entry must also differ from the (k+1)-th
    std::size_t upto = std::min(v.size(), k + 1);
    for (std::size_t i = 1; i < upto; ++i)
      if (!(v[i] < v[i - 1])) return false;
    return true;
  }

  std::vector<double> alphas_;
  std::vector<double> betas_;
  double gamma_;
};

inline ThomaParams validate_params(std::vector<double> alphas, std::vector<double> betas,
                                   double gamma) {
  return ThomaParams::make(std::move(alphas), std::move(betas), gamma);
}

//---------------------------------------------------------------------------//
// Letters and words
//---------------------------------------------------------------------------//

enum class LetterKind : std::uint8_t { Row, Col, Cont };

/// A letter x_i (Row), y_j (Col) or a point u of G = [0,1) (Cont).
struct Letter {
  LetterKind kind = LetterKind::Row;
  std::uint32_t index = 1;  // 1-based; unused for Cont
  double value = 0.0;       // position in [0,1); Cont only

  static constexpr Letter row(std::uint32_t i) noexcept { return {LetterKind::Row, i, 0.0}; }
  static constexpr Letter col(std::uint32_t j) noexcept { return {LetterKind::Col, j, 0.0}; }
  static constexpr Letter cont(double u) noexcept { return {LetterKind::Cont, 0, u}; }

  bool is_discrete() const noexcept { return kind != LetterKind::Cont; }

  friend bool operator==(const Letter& a, const Letter& b) noexcept {
    if (a.kind != b.kind) return false;
    return a.kind == LetterKind::Cont ? a.value == b.value : a.index == b.index;
  }
};

using Word = std::vector<Letter>;

/// Whether `letter` belongs to the alphabet governed by `params`.
inline bool letter_valid(const Letter& letter, const ThomaParams& params) noexcept {
  switch (letter.kind) {
    case LetterKind::Row: return letter.index >= 1 && letter.index <= params.num_alphas();
    case LetterKind::Col: return letter.index >= 1 && letter.index <= params.num_betas();
    case LetterKind::Cont: return params.gamma() > 0.0 && letter.value >= 0.0 && letter.value < 1.0;
  }
  return false;
}

//---------------------------------------------------------------------------//
// Linear orders
//---------------------------------------------------------------------------//

/// How equal letters relate: L_e letters are weakly increasing (a = a is
/// "↗"), L_o and G letters are not (a = a is "↘").
enum class TieClass : std::uint8_t { Increasing, Decreasing };

enum class Arrow : std::uint8_t { Up /* ↗ */, Down /* ↘ */ };

/// Position of a letter in a linear order; comparisons only look at rank and,
/// inside the continuous block, at value.
struct OrderKey {
  std::uint32_t rank = 0;
  TieClass ties = TieClass::Increasing;
  double value = 0.0;

  friend bool operator<(const OrderKey& a, const OrderKey& b) noexcept {
    return a.rank < b.rank || (a.rank == b.rank && a.value < b.value);
  }
  friend bool operator==(const OrderKey& a, const OrderKey& b) noexcept {
    return a.rank == b.rank && a.value == b.value;
  }
};

/// One block of a linear order: a single discrete letter or the whole of G.
struct Segment {
  bool continuous = false;
  Letter letter{};  // discrete letters only
  TieClass ties = TieClass::Increasing;

  static Segment discrete(Letter l, TieClass t) { return {false, l, t}; }
  static Segment block_g() { return {true, Letter::cont(0.0), TieClass::Decreasing}; }
};

/// A total order on the alphabet of a ThomaParams in which G is an interval.
class LinearOrder {
 public:
  LinearOrder() = default;

  /// Builds an order from segments listed from smallest to largest. Throws
  /// std::invalid_argument unless every letter x_1..x_A, y_1..y_B appears
  /// exactly once and G appears exactly once.
  LinearOrder(std::vector<Segment> segments, std::size_t num_rows, std::size_t num_cols,
              bool continuous_reversed = false)
      : segments_(std::move(segments)),
        continuous_reversed_(continuous_reversed),
        row_rank_(num_rows, kUnset),
        col_rank_(num_cols, kUnset),
        row_ties_(num_rows, TieClass::Increasing),
        col_ties_(num_cols, TieClass::Decreasing) {
    bool seen_g = false;
    for (std::uint32_t r = 0; r < segments_.size(); ++r) {
      const Segment& s = segments_[r];
      if (s.continuous) {
        if (seen_g) throw std::invalid_argument("G appears twice in order");
        seen_g = true;
        cont_rank_ = r;
        continue;
      }
      auto& ranks = s.letter.kind == LetterKind::Row ? row_rank_ : col_rank_;
      auto& ties = s.letter.kind == LetterKind::Row ? row_ties_ : col_ties_;
      if (s.letter.kind == LetterKind::Cont || s.letter.index < 1 || s.letter.index > ranks.size())
        throw std::invalid_argument("order mentions a letter outside the alphabet");
      if (ranks[s.letter.index - 1] != kUnset)
        throw std::invalid_argument("letter appears twice in order");
      ranks[s.letter.index - 1] = r;
      ties[s.letter.index - 1] = s.ties;
    }
    if (!seen_g) throw std::invalid_argument("order must contain the block G");
    for (auto r : row_rank_)
      if (r == kUnset) throw std::invalid_argument("order misses a row letter");
    for (auto r : col_rank_)
      if (r == kUnset) throw std::invalid_argument("order misses a column letter");
  }

  /// x_1 < x_2 < ... < y_1 < y_2 < ... < G with the natural classes.
  static LinearOrder standard(std::size_t num_rows, std::size_t num_cols) {
    std::vector<Segment> segs;
    for (std::uint32_t i = 1; i <= num_rows; ++i)
      segs.push_back(Segment::discrete(Letter::row(i), TieClass::Increasing));
    for (std::uint32_t j = 1; j <= num_cols; ++j)
      segs.push_back(Segment::discrete(Letter::col(j), TieClass::Decreasing));
    segs.push_back(Segment::block_g());
    return LinearOrder(std::move(segs), num_rows, num_cols);
  }
  static LinearOrder standard(const ThomaParams& p) { return standard(p.num_alphas(), p.num_betas()); }

  /// x_1 < ... < x_A < y_B < ... < y_1 < G, the order used for finite alphabets.
  static LinearOrder finite_alphabet(const ThomaParams& p) {
    std::vector<Segment> segs;
    for (std::uint32_t i = 1; i <= p.num_alphas(); ++i)
      segs.push_back(Segment::discrete(Letter::row(i), TieClass::Increasing));
    for (auto j = static_cast<std::uint32_t>(p.num_betas()); j >= 1; --j)
      segs.push_back(Segment::discrete(Letter::col(j), TieClass::Decreasing));
    segs.push_back(Segment::block_g());
    return LinearOrder(std::move(segs), p.num_alphas(), p.num_betas());
  }

  /// Parses "x1<y2<G<x2<y1"; row letters are L_e and column letters L_o
  /// unless suffixed ":o" / ":e", and "G~" orders G by decreasing value.
  /// A missing G is appended at the top. Inverse of to_string.
  static LinearOrder parse(std::string_view text, std::size_t num_rows, std::size_t num_cols) {
    std::vector<Segment> segs;
    bool reversed = false;
    std::size_t start = 0;
    while (start <= text.size()) {
      std::size_t stop = text.find('<', start);
      if (stop == std::string_view::npos) stop = text.size();
      std::string_view tok = trim(text.substr(start, stop - start));
      if (tok.empty()) throw std::invalid_argument("empty token in order");
      if (tok == "G" || tok == "g" || tok == "G~" || tok == "g~") {
        segs.push_back(Segment::block_g());
        reversed = tok.size() == 2;
      } else {
        std::optional<TieClass> ties;
        if (tok.size() > 2 && tok[tok.size() - 2] == ':') {
          const char c = tok.back();
          if (c != 'e' && c != 'o') throw std::invalid_argument("bad class suffix in '" + std::string(tok) + "'");
          ties = c == 'e' ? TieClass::Increasing : TieClass::Decreasing;
          tok.remove_suffix(2);
        }
        Letter l = parse_discrete(tok);
        segs.push_back(Segment::discrete(
            l, ties.value_or(l.kind == LetterKind::Row ? TieClass::Increasing : TieClass::Decreasing)));
      }
      start = stop + 1;
    }
    if (std::none_of(segs.begin(), segs.end(), [](const Segment& s) { return s.continuous; }))
      segs.push_back(Segment::block_g());
    return LinearOrder(std::move(segs), num_rows, num_cols, reversed);
  }

  /// The inverse order with the tie classes of discrete letters exchanged.
  LinearOrder transposed() const {
    std::vector<Segment> segs(segments_.rbegin(), segments_.rend());
    for (auto& s : segs)
      if (!s.continuous)
        s.ties = s.ties == TieClass::Increasing ? TieClass::Decreasing : TieClass::Increasing;
    return LinearOrder(std::move(segs), row_rank_.size(), col_rank_.size(), !continuous_reversed_);
  }

  OrderKey key(const Letter& l) const noexcept {
    switch (l.kind) {
      case LetterKind::Row: return {row_rank_[l.index - 1], row_ties_[l.index - 1], 0.0};
      case LetterKind::Col: return {col_rank_[l.index - 1], col_ties_[l.index - 1], 0.0};
      case LetterKind::Cont:
        return {cont_rank_, TieClass::Decreasing, continuous_reversed_ ? -l.value : l.value};
    }
    return {};
  }

  bool less(const Letter& a, const Letter& b) const noexcept { return key(a) < key(b); }

  TieClass tie_class(const Letter& l) const noexcept { return key(l).ties; }

  bool contains(const Letter& l) const noexcept {
    switch (l.kind) {
      case LetterKind::Row: return l.index >= 1 && l.index <= row_rank_.size();
      case LetterKind::Col: return l.index >= 1 && l.index <= col_rank_.size();
      case LetterKind::Cont: return l.value >= 0.0 && l.value < 1.0;
    }
    return false;
  }

  const std::vector<Segment>& segments() const noexcept { return segments_; }
  std::size_t num_rows() const noexcept { return row_rank_.size(); }
  std::size_t num_cols() const noexcept { return col_rank_.size(); }
  bool continuous_reversed() const noexcept { return continuous_reversed_; }
  std::uint32_t continuous_rank() const noexcept { return cont_rank_; }

  std::string to_string() const;

  friend bool operator==(const LinearOrder& a, const LinearOrder& b) {
    if (a.continuous_reversed_ != b.continuous_reversed_ || a.segments_.size() != b.segments_.size())
      return false;
    for (std::size_t i = 0; i < a.segments_.size(); ++i) {
      const auto& s = a.segments_[i];
      const auto& t = b.segments_[i];
      if (s.continuous != t.continuous || s.ties != t.ties) return false;
      if (!s.continuous && !(s.letter == t.letter)) return false;
    }
    return true;
  }

  static Letter parse_discrete(std::string_view tok) {
    if (tok.size() < 2 || (tok[0] != 'x' && tok[0] != 'y'))
      throw std::invalid_argument("bad letter token '" + std::string(tok) + "'");
    std::uint32_t idx = 0;
    for (char c : tok.substr(1)) {
      if (c < '0' || c > '9') throw std::invalid_argument("bad letter token '" + std::string(tok) + "'");
      idx = idx * 10 + static_cast<std::uint32_t>(c - '0');
    }
    if (idx == 0) throw std::invalid_argument("letter indices start at 1");
    return tok[0] == 'x' ? Letter::row(idx) : Letter::col(idx);
  }

 private:
  static constexpr std::uint32_t kUnset = 0xffffffffu;

  static std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
  }

  std::vector<Segment> segments_;
  bool continuous_reversed_ = false;
  std::vector<std::uint32_t> row_rank_;
  std::vector<std::uint32_t> col_rank_;
  std::uint32_t cont_rank_ = 0;
  std::vector<TieClass> row_ties_;
  std::vector<TieClass> col_ties_;
};

/// "x3", "y1", or "g" followed by the value with 17 significant digits.
inline std::string letter_to_string(const Letter& l) {
  switch (l.kind) {
    case LetterKind::Row: return "x" + std::to_string(l.index);
    case LetterKind::Col: return "y" + std::to_string(l.index);
    case LetterKind::Cont: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "g%.17g", l.value);
      return buf;
    }
  }
  return {};
}

inline std::string LinearOrder::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    if (i) out += '<';
    const auto& s = segments_[i];
    if (s.continuous) {
      out += continuous_reversed_ ? "G~" : "G";
      continue;
    }
    out += letter_to_string(s.letter);
    TieClass natural = s.letter.kind == LetterKind::Row ? TieClass::Increasing : TieClass::Decreasing;
    if (s.ties != natural) out += s.ties == TieClass::Increasing ? ":e" : ":o";
  }
  return out;
}

/// a ↗ b iff a < b, or a = b with a in L_e; otherwise a ↘ b.
inline Arrow compare_arrows(const LinearOrder& order, const Letter& a, const Letter& b) noexcept {
  OrderKey ka = order.key(a);
  OrderKey kb = order.key(b);
  if (ka < kb) return Arrow::Up;
  if (ka == kb && ka.ties == TieClass::Increasing) return Arrow::Up;
  return Arrow::Down;
}

//---------------------------------------------------------------------------//
// Young diagrams
//---------------------------------------------------------------------------//

/// A Young diagram stored as weakly decreasing positive row lengths.
class YoungDiagram {
 public:
  YoungDiagram() = default;

  /// Throws std::invalid_argument unless `rows` is weakly decreasing and
  /// positive; trailing zeros are dropped.
  explicit YoungDiagram(std::vector<int> rows) : rows_(std::move(rows)) {
    while (!rows_.empty() && rows_.back() == 0) rows_.pop_back();
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (rows_[i] <= 0) throw std::invalid_argument("diagram rows must be positive");
      if (i > 0 && rows_[i] > rows_[i - 1])
        throw std::invalid_argument("diagram rows must be weakly decreasing");
    }
  }
  YoungDiagram(std::initializer_list<int> rows) : YoungDiagram(std::vector<int>(rows)) {}

  const std::vector<int>& rows() const noexcept { return rows_; }
  std::size_t num_rows() const noexcept { return rows_.size(); }
  bool empty() const noexcept { return rows_.empty(); }

  int size() const noexcept { return std::accumulate(rows_.begin(), rows_.end(), 0); }

  /// λ_i (1-based), 0 past the last row.
  int row(std::size_t i) const noexcept { return i >= 1 && i <= rows_.size() ? rows_[i - 1] : 0; }

  /// λ'_j (1-based), the number of rows of length at least j.
  int col(std::size_t j) const noexcept {
    if (j < 1) return 0;
    auto it = std::partition_point(rows_.begin(), rows_.end(),
                                   [j](int r) { return static_cast<std::size_t>(r) >= j; });
    return static_cast<int>(it - rows_.begin());
  }

  std::vector<int> columns() const {
    std::vector<int> cols(rows_.empty() ? 0 : static_cast<std::size_t>(rows_.front()));
    for (std::size_t j = 0; j < cols.size(); ++j) cols[j] = col(j + 1);
    return cols;
  }

  YoungDiagram transpose() const { return YoungDiagram(columns()); }

  /// Sum of the first k row lengths.
  int row_prefix_sum(std::size_t k) const noexcept {
    int s = 0;
    for (std::size_t i = 0; i < std::min(k, rows_.size()); ++i) s += rows_[i];
    return s;
  }
  int col_prefix_sum(std::size_t k) const noexcept {
    int s = 0;
    for (std::size_t j = 1; j <= k; ++j) s += col(j);
    return s;
  }

  /// "3,2,1,1"; the empty diagram prints as "".
  std::string to_string() const {
    std::string out;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(rows_[i]);
    }
    return out;
  }

  friend auto operator<=>(const YoungDiagram&, const YoungDiagram&) = default;
  friend bool operator==(const YoungDiagram&, const YoungDiagram&) = default;

 private:
  std::vector<int> rows_;
};

inline YoungDiagram transpose(const YoungDiagram& d) { return d.transpose(); }

//---------------------------------------------------------------------------//
// Tableaux
//---------------------------------------------------------------------------//

template <class T>
YoungDiagram shape_of(const std::vector<std::vector<T>>& rows) {
  std::vector<int> lens;
  lens.reserve(rows.size());
  for (const auto& r : rows) lens.push_back(static_cast<int>(r.size()));
  return YoungDiagram(std::move(lens));
}

/// Rows of letters; an A_p-tableau when `is_valid` holds for the order.
struct InsertionTableau {
  std::vector<std::vector<Letter>> rows;

  YoungDiagram shape() const { return shape_of(rows); }

  /// Rows increase (↗) left to right; in each column the lower entry ↘ the
  /// upper one.
  bool is_valid(const LinearOrder& order) const {
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].empty()) return false;
      if (r > 0 && rows[r].size() > rows[r - 1].size()) return false;
      for (std::size_t c = 0; c < rows[r].size(); ++c) {
        if (!order.contains(rows[r][c])) return false;
        if (c > 0 && compare_arrows(order, rows[r][c - 1], rows[r][c]) != Arrow::Up) return false;
        if (r > 0 && compare_arrows(order, rows[r][c], rows[r - 1][c]) != Arrow::Down) return false;
      }
    }
    return true;
  }

  friend bool operator==(const InsertionTableau&, const InsertionTableau&) = default;
};

/// Rows of the numbers 1..n increasing along rows and down columns.
struct StandardTableau {
  std::vector<std::vector<int>> rows;

  YoungDiagram shape() const { return shape_of(rows); }

  bool is_valid() const {
    std::size_t n = 0;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].empty()) return false;
      if (r > 0 && rows[r].size() > rows[r - 1].size()) return false;
      n += rows[r].size();
    }
    std::vector<bool> seen(n + 1, false);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (std::size_t c = 0; c < rows[r].size(); ++c) {
        int v = rows[r][c];
        if (v < 1 || static_cast<std::size_t>(v) > n || seen[static_cast<std::size_t>(v)]) return false;
        seen[static_cast<std::size_t>(v)] = true;
        if (c > 0 && rows[r][c - 1] >= v) return false;
        if (r > 0 && rows[r - 1][c] >= v) return false;
      }
    }
    return true;
  }

  friend bool operator==(const StandardTableau&, const StandardTableau&) = default;
};

//---------------------------------------------------------------------------//
// Letter counts and tableau types
//---------------------------------------------------------------------------//

/// Occurrences of each x_i, each y_j, and of G letters.
struct LetterCounts {
  std::vector<std::int64_t> rows;
  std::vector<std::int64_t> cols;
  std::int64_t cont = 0;

  std::int64_t row(std::size_t i) const noexcept { return i >= 1 && i <= rows.size() ? rows[i - 1] : 0; }
  std::int64_t col(std::size_t j) const noexcept { return j >= 1 && j <= cols.size() ? cols[j - 1] : 0; }
  std::int64_t total() const noexcept {
    return cont + std::accumulate(rows.begin(), rows.end(), std::int64_t{0}) +
           std::accumulate(cols.begin(), cols.end(), std::int64_t{0});
  }

  void add(const Letter& l) {
    switch (l.kind) {
      case LetterKind::Row:
        if (l.index > rows.size()) rows.resize(l.index, 0);
        ++rows[l.index - 1];
        break;
      case LetterKind::Col:
        if (l.index > cols.size()) cols.resize(l.index, 0);
        ++cols[l.index - 1];
        break;
      case LetterKind::Cont: ++cont; break;
    }
  }

  friend auto operator<=>(const LetterCounts&, const LetterCounts&) = default;
  friend bool operator==(const LetterCounts&, const LetterCounts&) = default;
};

inline LetterCounts letter_counts(std::span<const Letter> word, const ThomaParams& params) {
  LetterCounts c;
  c.rows.assign(params.num_alphas(), 0);
  c.cols.assign(params.num_betas(), 0);
  for (const Letter& l : word) c.add(l);
  return c;
}

/// The type (n_i, n'_j, m) of an A_p-tableau.
inline LetterCounts tableau_type(const InsertionTableau& tableau, const ThomaParams& params) {
  LetterCounts c;
  c.rows.assign(params.num_alphas(), 0);
  c.cols.assign(params.num_betas(), 0);
  for (const auto& row : tableau.rows)
    for (const Letter& l : row) c.add(l);
  return c;
}

}  // namespace thoma
