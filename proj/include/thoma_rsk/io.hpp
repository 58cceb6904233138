#pragma once

// Text and JSON forms of parameters, words, diagrams and tableaux.

#include <charconv>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "thoma_rsk/core.hpp"
#include "thoma_rsk/numeric.hpp"

namespace thoma {

using json = nlohmann::ordered_json;

inline json params_to_json(const ThomaParams& p) {
  return json{{"alphas", p.alphas()}, {"betas", p.betas()}, {"gamma", p.gamma()}};
}

/// {"alphas": [...], "betas": [...], "gamma": r}; missing keys mean empty / 0.
inline ThomaParams params_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("params must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (key != "alphas" && key != "betas" && key != "gamma")
      throw std::invalid_argument("unknown params key '" + key + "'");
  try {
    auto alphas = j.value("alphas", std::vector<double>{});
    auto betas = j.value("betas", std::vector<double>{});
    double gamma = j.value("gamma", 0.0);
    return validate_params(std::move(alphas), std::move(betas), gamma);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed params: ") + e.what());
  }
}

inline json diagram_to_json(const YoungDiagram& d) { return json(d.rows()); }

inline YoungDiagram diagram_from_json(const json& j) { return YoungDiagram(j.get<std::vector<int>>()); }

/// Space-separated tokens "x3", "y1", "g0.73125...".
inline std::string word_to_string(std::span<const Letter> word) {
  std::string out;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (i) out += ' ';
    out += letter_to_string(word[i]);
  }
  return out;
}

inline Letter parse_letter(std::string_view tok) {
  if (tok.size() < 2) throw std::invalid_argument("bad letter '" + std::string(tok) + "'");
  if (tok[0] == 'g') {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data() + 1, tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || !(v >= 0.0 && v < 1.0))
      throw std::invalid_argument("bad continuous letter '" + std::string(tok) + "'");
    return Letter::cont(v);
  }
  return LinearOrder::parse_discrete(tok);
}

/// Parses a word line; if `params` is given, every letter must belong to it.
inline Word parse_word(std::string_view text, const ThomaParams* params = nullptr) {
  Word out;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) {
    Letter l = parse_letter(tok);
    if (params && !letter_valid(l, *params))
      throw std::invalid_argument("letter '" + tok + "' is not in the alphabet");
    out.push_back(l);
  }
  return out;
}

inline json tableau_to_json(const InsertionTableau& t) {
  json rows = json::array();
  for (const auto& row : t.rows) {
    json r = json::array();
    for (const auto& l : row) r.push_back(letter_to_string(l));
    rows.push_back(std::move(r));
  }
  return rows;
}

inline json tableau_to_json(const StandardTableau& t) { return json(t.rows); }

inline json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    json r = json::array();
    for (std::size_t j = 0; j < m.dim(); ++j) r.push_back(m(i, j));
    rows.push_back(std::move(r));
  }
  return rows;
}

/// Shortest round-trip decimal form of a double.
inline std::string format_double(double x) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

}  // namespace thoma
