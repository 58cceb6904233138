#pragma once

// Generalized RSK on words over L_e ∪ L_o ∪ G, its inverse, the transposed
// map, and brute-force Greene invariants used as an independent check.

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "thoma_rsk/core.hpp"

namespace thoma {

struct RskOutput {
  InsertionTableau R;
  StandardTableau S;
  YoungDiagram shape;
};

/// Row-bumping engine for one linear order.
///
/// Rows are kept sorted by OrderKey. An L_e letter bumps the left-most entry
/// strictly greater than itself; L_o and G letters also bump an equal entry.
/// Both are a single binary search per row.
///
/// Runs of identical consecutive rows are stored once with a multiplicity.
/// An L_o letter bumping its own copy leaves such a run unchanged, so the
/// long single-letter columns built by L_o letters are crossed in one step.
class RowInserter {
 public:
  struct Cell {
    OrderKey key;
    Letter letter;
  };

  explicit RowInserter(const LinearOrder& order) : order_(&order) {}

  /// Inserts `x`; `on_bump(row, letter)` fires for every entry bumped out of
  /// `row`. Returns the index of the row that received the new box.
  template <class OnBump>
  std::size_t insert(const Letter& x, OnBump&& on_bump) {
    Cell cur{order_->key(x), x};
    std::size_t row_index = 0;
    for (std::size_t b = 0;; ++b) {
      if (b == blocks_.size()) {
        if (!blocks_.empty() && blocks_.back().row.size() == 1 && blocks_.back().row[0].key == cur.key)
          ++blocks_.back().count;
        else
          blocks_.push_back({{cur}, 1});
        return row_index;
      }
      const auto& row = blocks_[b].row;
      const auto it = cur.key.ties == TieClass::Increasing
                          ? std::upper_bound(row.begin(), row.end(), cur.key,
                                             [](const OrderKey& k, const Cell& c) { return k < c.key; })
                          : std::lower_bound(row.begin(), row.end(), cur.key,
                                             [](const Cell& c, const OrderKey& k) { return c.key < k; });
      const auto pos = static_cast<std::size_t>(it - row.begin());
      if (pos < row.size() && row[pos].key == cur.key) {
        // bumps its own copy in every row of the run
        for (std::size_t k = 0; k < blocks_[b].count; ++k) on_bump(row_index + k, cur.letter);
        row_index += blocks_[b].count;
        continue;
      }
      split_first(b);
      auto& first = blocks_[b].row;
      if (pos == first.size()) {
        first.push_back(cur);
        return row_index;
      }
      std::swap(first[pos], cur);
      on_bump(row_index, cur.letter);
      ++row_index;
    }
  }

  std::size_t insert(const Letter& x) {
    return insert(x, [](std::size_t, const Letter&) {});
  }

  const std::vector<Cell>& first_row() const noexcept {
    static const std::vector<Cell> empty;
    return blocks_.empty() ? empty : blocks_.front().row;
  }

  YoungDiagram shape() const {
    std::vector<int> lens;
    for (const auto& blk : blocks_) lens.insert(lens.end(), blk.count, static_cast<int>(blk.row.size()));
    return YoungDiagram(std::move(lens));
  }

  InsertionTableau tableau() const {
    InsertionTableau t;
    for (const auto& blk : blocks_) {
      std::vector<Letter> letters;
      letters.reserve(blk.row.size());
      for (const auto& c : blk.row) letters.push_back(c.letter);
      t.rows.insert(t.rows.end(), blk.count, letters);
    }
    return t;
  }

 private:
  struct Block {
    std::vector<Cell> row;
    std::size_t count;
  };

  // detaches the first row of run b so it can change alone
  void split_first(std::size_t b) {
    if (blocks_[b].count == 1) return;
    Block rest{blocks_[b].row, blocks_[b].count - 1};
    blocks_[b].count = 1;
    blocks_.insert(blocks_.begin() + static_cast<std::ptrdiff_t>(b) + 1, std::move(rest));
  }

  const LinearOrder* order_;
  std::vector<Block> blocks_;
};

/// R(w), S(w) and the common shape φ_p(w). With `check_each_step`, every
/// intermediate tableau is validated and std::logic_error thrown on failure.
inline RskOutput rsk(std::span<const Letter> word, const LinearOrder& order,
                     bool check_each_step = false) {
  RowInserter ins(order);
  StandardTableau S;
  for (std::size_t i = 0; i < word.size(); ++i) {
    std::size_t r = ins.insert(word[i]);
    if (r == S.rows.size()) S.rows.emplace_back();
    S.rows[r].push_back(static_cast<int>(i + 1));
    if (check_each_step && !ins.tableau().is_valid(order))
      throw std::logic_error("insertion produced an invalid tableau at step " + std::to_string(i + 1));
  }
  RskOutput out{ins.tableau(), std::move(S), ins.shape()};
  return out;
}

/// φ_p(w) only.
inline YoungDiagram rsk_shape(std::span<const Letter> word, const LinearOrder& order) {
  RowInserter ins(order);
  for (const Letter& l : word) ins.insert(l);
  return ins.shape();
}

/// Inserts `x` into a copy of `tableau`.
inline InsertionTableau row_insert(const InsertionTableau& tableau, const Letter& x,
                                   const LinearOrder& order) {
  InsertionTableau out = tableau;
  Letter cur = x;
  for (std::size_t r = 0;; ++r) {
    if (r == out.rows.size()) {
      out.rows.push_back({cur});
      return out;
    }
    auto& row = out.rows[r];
    OrderKey k = order.key(cur);
    auto it = k.ties == TieClass::Increasing
                  ? std::upper_bound(row.begin(), row.end(), k,
                                     [&](const OrderKey& a, const Letter& b) { return a < order.key(b); })
                  : std::lower_bound(row.begin(), row.end(), k,
                                     [&](const Letter& a, const OrderKey& b) { return order.key(a) < b; });
    if (it == row.end()) {
      row.push_back(cur);
      return out;
    }
    std::swap(*it, cur);
  }
}

/// Recovers the word from an (R, S) pair. Throws std::invalid_argument when
/// the shapes differ or either tableau is invalid.
inline Word rsk_bijection_inverse(const InsertionTableau& R, const StandardTableau& S,
                                  const LinearOrder& order) {
  if (!(R.shape() == S.shape())) throw std::invalid_argument("R and S have different shapes");
  if (!R.is_valid(order)) throw std::invalid_argument("R is not an A_p-tableau");
  if (!S.is_valid()) throw std::invalid_argument("S is not a standard tableau");

  auto rows = R.rows;
  auto srows = S.rows;
  const int n = R.shape().size();
  Word word(static_cast<std::size_t>(n));
  for (int step = n; step >= 1; --step) {
    std::size_t r = 0;
    while (srows[r].back() != step) ++r;  // the largest entry sits at a corner
    srows[r].pop_back();
    Letter y = rows[r].back();
    rows[r].pop_back();
    if (rows[r].empty()) {
      rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(r));
      srows.erase(srows.begin() + static_cast<std::ptrdiff_t>(r));
    }
    // y was bumped out of row r-1 by the right-most x with y ↘ x
    for (std::size_t rr = r; rr-- > 0;) {
      auto& row = rows[rr];
      std::size_t pos = row.size();
      while (pos > 0 && compare_arrows(order, y, row[pos - 1]) != Arrow::Down) --pos;
      if (pos == 0) throw std::invalid_argument("pair (R, S) is not in the image of RSK");
      std::swap(row[pos - 1], y);
    }
    word[static_cast<std::size_t>(step - 1)] = y;
  }
  return word;
}

/// RSK under the inverse order with L_e and L_o exchanged.
inline RskOutput transposed_rsk(std::span<const Letter> word, const LinearOrder& order) {
  return rsk(word, order.transposed());
}

//---------------------------------------------------------------------------//
// Greene invariants by exhaustive search
//---------------------------------------------------------------------------//

inline constexpr std::size_t kGreeneCap = 10;

namespace detail {

// Max total length of k disjoint subsequences each chained by `arrow`.
// Dynamic program over positions; the state is the multiset of last letters
// per subsequence (0 = unused), packed 4 bits per slot.
inline int greene_search(std::span<const Letter> word, const LinearOrder& order, std::size_t k,
                         Arrow arrow, std::size_t cap) {
  const std::size_t n = word.size();
  if (n > cap) throw std::invalid_argument("word longer than the brute-force cap");
  if (k == 0) throw std::invalid_argument("k must be positive");
  if (k >= n) return static_cast<int>(n);

  std::vector<unsigned> id(n);
  for (std::size_t p = 0; p < n; ++p) {
    std::size_t q = 0;
    while (!(word[q] == word[p])) ++q;
    id[p] = static_cast<unsigned>(q + 1);
  }
  // rel[a][b]: letter with id a may be followed by letter with id b
  std::vector<std::vector<char>> rel(n + 1, std::vector<char>(n + 1, 1));
  for (std::size_t a = 1; a <= n; ++a)
    for (std::size_t b = 1; b <= n; ++b)
      rel[a][b] = compare_arrows(order, word[a - 1], word[b - 1]) == arrow;

  auto unpack = [k](std::uint64_t s) {
    std::vector<unsigned> v(k);
    for (std::size_t i = 0; i < k; ++i) v[i] = static_cast<unsigned>((s >> (4 * i)) & 0xf);
    return v;
  };
  auto pack = [k](std::vector<unsigned> v) {
    std::sort(v.begin(), v.end());
    std::uint64_t s = 0;
    for (std::size_t i = 0; i < k; ++i) s |= static_cast<std::uint64_t>(v[i]) << (4 * i);
    return s;
  };

  std::unordered_map<std::uint64_t, int> layer{{0, 0}};
  for (std::size_t p = 0; p < n; ++p) {
    std::unordered_map<std::uint64_t, int> next;
    auto relax = [&next](std::uint64_t s, int v) {
      auto [it, fresh] = next.try_emplace(s, v);
      if (!fresh && it->second < v) it->second = v;
    };
    for (const auto& [state, best] : layer) {
      relax(state, best);
      auto slots = unpack(state);
      for (std::size_t i = 0; i < k; ++i) {
        if (i > 0 && slots[i] == slots[i - 1]) continue;
        if (slots[i] != 0 && !rel[slots[i]][id[p]]) continue;
        auto moved = slots;
        moved[i] = id[p];
        relax(pack(moved), best + 1);
      }
    }
    layer = std::move(next);
  }
  int best = 0;
  for (const auto& [state, v] : layer) best = std::max(best, v);
  return best;
}

}  // namespace detail

/// r_k(w): largest union of k disjoint increasing (↗) subsequences.
inline int greene_rk(std::span<const Letter> word, const LinearOrder& order, std::size_t k,
                     std::size_t cap = kGreeneCap) {
  return detail::greene_search(word, order, k, Arrow::Up, cap);
}

/// c_k(w): largest union of k disjoint decreasing (↘) subsequences.
inline int greene_ck(std::span<const Letter> word, const LinearOrder& order, std::size_t k,
                     std::size_t cap = kGreeneCap) {
  return detail::greene_search(word, order, k, Arrow::Down, cap);
}

//---------------------------------------------------------------------------//
// ASCII dumps
//---------------------------------------------------------------------------//

inline std::string to_ascii(const InsertionTableau& t) {
  std::string out;
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ' ';
      out += letter_to_string(row[c]);
    }
    out += '\n';
  }
  return out;
}

inline std::string to_ascii(const StandardTableau& t) {
  std::string out;
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ' ';
      out += std::to_string(row[c]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace thoma
