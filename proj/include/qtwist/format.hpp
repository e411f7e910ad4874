#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qtwist/tensor.hpp"

namespace qtwist {

/// "H1^2*X3", or "1" for the unit monomial.
inline std::string format_monomial(const Algebra& alg, const std::uint8_t* e) {
  std::string s;
  for (std::size_t i = 0; i < alg.width(); ++i) {
    if (e[i] == 0) continue;
    if (!s.empty()) s += "*";
    s += alg.names()[i];
    if (e[i] > 1) s += "^" + std::to_string(int(e[i]));
  }
  return s.empty() ? "1" : s;
}

/// One term: "[coef ][h^k ]leg⊗leg...". A unit coefficient is omitted and
/// -1 renders as a bare sign.
inline std::string format_term(const Algebra& alg, std::size_t legs, const TermKey& key, const Scalar& coef) {
  std::string s;
  if (coef == -1) s = "-";
  else if (coef != 1) s = to_string(coef) + " ";
  if (key.power == 1) s += "h ";
  else if (key.power > 1) s += "h^" + std::to_string(key.power) + " ";
  for (std::size_t l = 0; l < legs; ++l) {
    if (l) s += "⊗";
    s += format_monomial(alg, key.exps.data() + l * alg.width());
  }
  return s;
}

/// One line per term in (power, monomial) order; "0" for the zero tensor.
template <std::size_t L>
std::vector<std::string> format_lines(const Tensor<L>& t) {
  std::vector<std::string> out;
  for (const auto& [k, c] : t.terms()) out.push_back(format_term(t.alg(), L, k, c));
  if (out.empty()) out.push_back("0");
  return out;
}

template <std::size_t L>
std::string format_tensor(const Tensor<L>& t) {
  std::string s;
  for (const auto& line : format_lines(t)) {
    if (!s.empty()) s += " + ";
    s += line;
  }
  return s;
}

}  // namespace qtwist
