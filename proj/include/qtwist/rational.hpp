#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <regex>
#include <string>
#include <string_view>

namespace qtwist {

/// Exact coefficient type. mpq_class keeps values canonical (lowest terms,
/// positive denominator) after every arithmetic operation.
using Scalar = mpq_class;

inline Scalar make_scalar(long num, long den = 1) {
  Scalar q(num, den);
  q.canonicalize();
  return q;
}

/// Parses "p", "p/q" with optional sign. U+2212 (minus sign) is accepted
/// as a synonym for '-'. Anything else, including decimals, is rejected.
inline std::optional<Scalar> parse_rational(std::string_view text) {
  std::string s(text);
  const std::string unicode_minus = "\xE2\x88\x92";
  if (s.rfind(unicode_minus, 0) == 0) s = "-" + s.substr(unicode_minus.size());
  static const std::regex pattern(R"(^[+-]?[0-9]+(/[0-9]+)?$)");
  if (!std::regex_match(s, pattern)) return std::nullopt;
  if (s.front() == '+') s.erase(0, 1);
  const auto slash = s.find('/');
  if (slash != std::string::npos) {
    mpz_class den(s.substr(slash + 1));
    if (den == 0) return std::nullopt;
  }
  Scalar q(s);
  q.canonicalize();
  return q;
}

inline std::string to_string(const Scalar& q) { return q.get_str(); }

inline Scalar factorial_inverse(unsigned k) {
  mpz_class f = 1;
  for (unsigned i = 2; i <= k; ++i) f *= i;
  return Scalar(mpz_class(1), f);
}

}  // namespace qtwist
