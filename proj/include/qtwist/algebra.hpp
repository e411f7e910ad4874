#pragma once

#include <boost/container/small_vector.hpp>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <tuple>
#include <vector>

#include "qtwist/error.hpp"
#include "qtwist/rational.hpp"

namespace qtwist {

/// Exponent vector. For one leg it is (a_1..a_m, b_1..b_n), i.e. the
/// normal-ordered word H_1^a_1 ... H_m^a_m X_1^b_1 ... X_n^b_n. Multi-leg
/// keys concatenate the legs.
using Exps = boost::container::small_vector<std::uint8_t, 24>;

/// Sparse-map key: deformation power first, then the exponent vector, so
/// the natural map order is (power ascending, monomial lexicographic).
struct TermKey {
  int power = 0;
  Exps exps;

  friend bool operator==(const TermKey& a, const TermKey& b) {
    return a.power == b.power && a.exps == b.exps;
  }
  friend bool operator<(const TermKey& a, const TermKey& b) {
    if (a.power != b.power) return a.power < b.power;
    return std::lexicographical_compare(a.exps.begin(), a.exps.end(), b.exps.begin(), b.exps.end());
  }
};

namespace detail {
inline std::uint8_t add_exp(std::uint8_t a, std::uint8_t b) {
  const unsigned s = unsigned(a) + unsigned(b);
  if (s > 255) throw shape_error("monomial exponent overflow");
  return static_cast<std::uint8_t>(s);
}
}  // namespace detail

/// Multiplication context for U(L) or its deformation U_alpha(L).
///
/// Holds the commutator table C[j][mu] = [H_j, X_mu], each a pure-H
/// polynomial graded by deformation power, and memoizes the reordering
/// X^b H^c = sum c_k hbar^k H^e X^f. All X commute, all H commute, and
/// [H_j, X_mu] commutes with every H, so moving X_mu across a pure-H
/// polynomial p acts as the derivation D_mu(p) = -sum_j (dp/dH_j) C[j][mu].
class Algebra {
public:
  struct PureHTerm {
    int power;
    Exps h;
    Scalar coef;
  };
  using PureHPoly = std::vector<PureHTerm>;

  struct ReorderTerm {
    int power;
    Exps h;
    Exps x;
    Scalar coef;
  };

  Algebra(std::size_t m, std::size_t n, int max_order, std::vector<std::string> names,
          std::vector<PureHPoly> table)
      : m_(m), n_(n), max_order_(max_order), names_(std::move(names)), table_(std::move(table)) {
    if (m_ + n_ > 24) throw shape_error("at most 24 generators per leg are supported");
    if (names_.empty()) names_ = default_names(m_, n_);
    if (names_.size() != m_ + n_) throw shape_error("generator name count does not match m + n");
    if (table_.empty()) table_.resize(m_ * n_);
    if (table_.size() != m_ * n_) throw shape_error("commutator table must have m*n entries");
    abelian_ = std::all_of(table_.begin(), table_.end(), [](const PureHPoly& p) { return p.empty(); });
  }

  /// Commutative algebra on the same generators; used for pure-H work.
  static std::shared_ptr<const Algebra> abelian(std::size_t m, std::size_t n, int max_order,
                                                std::vector<std::string> names = {}) {
    return std::make_shared<const Algebra>(m, n, max_order, std::move(names), std::vector<PureHPoly>{});
  }

  static std::vector<std::string> default_names(std::size_t m, std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < m; ++i) out.push_back("H" + std::to_string(i + 1));
    for (std::size_t i = 0; i < n; ++i) out.push_back("X" + std::to_string(i + 1));
    return out;
  }

  std::size_t m() const noexcept { return m_; }
  std::size_t n() const noexcept { return n_; }
  std::size_t width() const noexcept { return m_ + n_; }
  int max_order() const noexcept { return max_order_; }
  bool is_abelian() const noexcept { return abelian_; }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const PureHPoly& commutator(std::size_t j, std::size_t mu) const { return table_.at(j * n_ + mu); }

  /// X^x H^h as a normal-ordered sum, sorted by power. x has n entries and
  /// h has m entries. The returned reference stays valid for the lifetime
  /// of the algebra.
  const std::vector<ReorderTerm>& reorder(const std::uint8_t* x, const std::uint8_t* h) const {
    Exps key(x, x + n_);
    key.insert(key.end(), h, h + m_);
    {
      std::shared_lock lock(memo_mutex_);
      auto it = memo_.find(key);
      if (it != memo_.end()) return it->second;
    }
    auto value = compute_reorder(x, h);
    std::unique_lock lock(memo_mutex_);
    return memo_.try_emplace(std::move(key), std::move(value)).first->second;
  }

private:
  std::vector<ReorderTerm> compute_reorder(const std::uint8_t* x, const std::uint8_t* h) const {
    const bool x_zero = std::all_of(x, x + n_, [](std::uint8_t e) { return e == 0; });
    const bool h_zero = std::all_of(h, h + m_, [](std::uint8_t e) { return e == 0; });
    if (x_zero || h_zero || abelian_) {
      return {ReorderTerm{0, Exps(h, h + m_), Exps(x, x + n_), Scalar(1)}};
    }
    std::size_t mu = n_;
    while (x[mu - 1] == 0) --mu;
    --mu;
    Exps xr(x, x + n_);
    --xr[mu];

    using Key = std::tuple<int, Exps, Exps>;
    std::map<Key, Scalar> acc;

    // (X^{x - e_mu} H^h) X_mu
    for (const auto& t : reorder(xr.data(), h)) {
      Exps xx = t.x;
      xx[mu] = detail::add_exp(xx[mu], 1);
      acc[Key{t.power, t.h, std::move(xx)}] += t.coef;
    }
    // X^{x - e_mu} D_mu(H^h)
    for (std::size_t j = 0; j < m_; ++j) {
      if (h[j] == 0) continue;
      for (const auto& c : commutator(j, mu)) {
        if (c.power > max_order_) continue;
        Exps hh(h, h + m_);
        --hh[j];
        for (std::size_t i = 0; i < m_; ++i) hh[i] = detail::add_exp(hh[i], c.h[i]);
        const Scalar coef = -Scalar(h[j]) * c.coef;
        for (const auto& t : reorder(xr.data(), hh.data())) {
          if (c.power + t.power > max_order_) break;
          acc[Key{c.power + t.power, t.h, t.x}] += coef * t.coef;
        }
      }
    }
    std::vector<ReorderTerm> out;
    out.reserve(acc.size());
    for (auto& [k, v] : acc) {
      if (v == 0) continue;
      out.push_back(ReorderTerm{std::get<0>(k), std::get<1>(k), std::get<2>(k), std::move(v)});
    }
    return out;
  }

  std::size_t m_;
  std::size_t n_;
  int max_order_;
  std::vector<std::string> names_;
  std::vector<PureHPoly> table_;
  bool abelian_ = true;

  mutable std::shared_mutex memo_mutex_;
  mutable std::map<Exps, std::vector<ReorderTerm>> memo_;
};

using AlgebraPtr = std::shared_ptr<const Algebra>;

}  // namespace qtwist
