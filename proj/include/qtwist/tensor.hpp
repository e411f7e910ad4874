#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "qtwist/algebra.hpp"
#include "qtwist/error.hpp"
#include "qtwist/rational.hpp"

namespace qtwist {

/// Truncated element of U^{(x)Legs}: a sparse map from (deformation power,
/// exponent vectors of every leg) to exact rationals. Terms with power
/// above `order()` are dropped and zero coefficients are never stored, so
/// equality is term-map equality.
template <std::size_t Legs>
class Tensor {
  static_assert(Legs >= 1, "a tensor needs at least one leg");

public:
  using Terms = std::map<TermKey, Scalar>;
  static constexpr std::size_t legs = Legs;

  Tensor() = default;
  Tensor(AlgebraPtr alg, int order) : alg_(std::move(alg)), order_(order) {
    if (!alg_) throw shape_error("tensor requires an algebra");
    if (order_ < 0) throw shape_error("truncation order must be non-negative");
    if (order_ > alg_->max_order()) throw shape_error("truncation order exceeds the algebra's order");
  }

  static Tensor unit(AlgebraPtr alg, int order) { return scalar(std::move(alg), order, Scalar(1)); }

  static Tensor scalar(AlgebraPtr alg, int order, const Scalar& c, int power = 0) {
    Tensor t(alg, order);
    t.add_term(power, Exps(Legs * t.alg_->width(), 0), c);
    return t;
  }

  const AlgebraPtr& algebra() const noexcept { return alg_; }
  const Algebra& alg() const { return *alg_; }
  int order() const noexcept { return order_; }
  const Terms& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }

  /// Adds c * hbar^power * monomial; terms above the order vanish.
  void add_term(int power, const Exps& exps, const Scalar& c) {
    if (exps.size() != Legs * alg_->width()) throw shape_error("exponent vector has the wrong length");
    if (power > order_ || c == 0) return;
    if (power < 0) throw shape_error("negative deformation power");
    auto [it, inserted] = terms_.try_emplace(TermKey{power, exps}, c);
    if (inserted) {
      it->second.canonicalize();
    } else {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  /// Smallest deformation power present; order() + 1 for zero.
  int valuation() const noexcept { return terms_.empty() ? order_ + 1 : terms_.begin()->first.power; }

  Tensor truncated(int order) const {
    if (order > order_) throw shape_error("cannot raise the truncation order of a tensor");
    Tensor t(alg_, order);
    for (const auto& [k, c] : terms_)
      if (k.power <= order) t.terms_.emplace(k, c);
    return t;
  }

  /// Same terms at a lower or equal order on another compatible algebra.
  Tensor rehomed(AlgebraPtr alg, int order) const {
    if (alg->width() != alg_->width() || alg->m() != alg_->m()) throw shape_error("rehome: dimension mismatch");
    Tensor t(std::move(alg), order);
    for (const auto& [k, c] : terms_)
      if (k.power <= order) t.terms_.emplace(k, c);
    return t;
  }

  /// Multiplies by hbar^k.
  Tensor shifted(int k) const {
    Tensor t(alg_, order_);
    for (const auto& [key, c] : terms_)
      if (key.power + k <= order_) t.terms_.emplace(TermKey{key.power + k, key.exps}, c);
    return t;
  }

  Tensor& operator+=(const Tensor& o) {
    check_compatible(o);
    for (const auto& [k, c] : o.terms_) add_term(k.power, k.exps, c);
    return *this;
  }
  Tensor& operator-=(const Tensor& o) {
    check_compatible(o);
    for (const auto& [k, c] : o.terms_) add_term(k.power, k.exps, -c);
    return *this;
  }
  Tensor& operator*=(const Scalar& s) {
    if (s == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [k, c] : terms_) c *= s;
    return *this;
  }

  friend Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
  friend Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
  friend Tensor operator-(Tensor a) { return a *= Scalar(-1); }
  friend Tensor operator*(Tensor a, const Scalar& s) { return a *= s; }
  friend Tensor operator*(const Scalar& s, Tensor a) { return a *= s; }

  friend Tensor operator*(const Tensor& a, const Tensor& b) { return multiply(a, b); }

  friend bool operator==(const Tensor& a, const Tensor& b) {
    return a.order_ == b.order_ && a.terms_ == b.terms_;
  }

  void check_compatible(const Tensor& o) const {
    if (!alg_ || !o.alg_) throw shape_error("operation on a default-constructed tensor");
    if (order_ != o.order_) throw shape_error("truncation orders differ");
    if (alg_->m() != o.alg_->m() || alg_->n() != o.alg_->n()) throw shape_error("algebra dimensions differ");
  }

  static Tensor multiply(const Tensor& a, const Tensor& b);

private:
  struct LegTerm {
    int power;
    Exps exps;
    const Scalar* coef;  // null means 1
  };

  static void leg_product(const Algebra& alg, const std::uint8_t* a, const std::uint8_t* b, int budget,
                          std::vector<LegTerm>& out) {
    out.clear();
    const std::size_t m = alg.m();
    const std::size_t n = alg.n();
    const std::uint8_t* ax = a + m;
    const std::uint8_t* bh = b;
    const bool simple = alg.is_abelian() || std::all_of(ax, ax + n, [](std::uint8_t e) { return e == 0; }) ||
                        std::all_of(bh, bh + m, [](std::uint8_t e) { return e == 0; });
    if (simple) {
      Exps e(m + n);
      for (std::size_t i = 0; i < m + n; ++i) e[i] = detail::add_exp(a[i], b[i]);
      out.push_back(LegTerm{0, std::move(e), nullptr});
      return;
    }
    for (const auto& t : alg.reorder(ax, bh)) {
      if (t.power > budget) break;
      Exps e(m + n);
      for (std::size_t i = 0; i < m; ++i) e[i] = detail::add_exp(a[i], t.h[i]);
      for (std::size_t i = 0; i < n; ++i) e[m + i] = detail::add_exp(t.x[i], b[m + i]);
      out.push_back(LegTerm{t.power, std::move(e), &t.coef});
    }
  }

  AlgebraPtr alg_;
  int order_ = 0;
  Terms terms_;

  template <std::size_t L>
  friend class Tensor;
};

template <std::size_t Legs>
Tensor<Legs> Tensor<Legs>::multiply(const Tensor& a, const Tensor& b) {
  a.check_compatible(b);
  if (a.alg_ != b.alg_) throw shape_error("factors belong to different algebras");
  const Algebra& alg = *a.alg_;
  const int order = a.order_;
  const std::size_t w = alg.width();
  Tensor out(a.alg_, order);
  std::array<std::vector<LegTerm>, Legs> legs;
  Exps key(Legs * w);

  for (const auto& [ka, ca] : a.terms_) {
    if (ka.power > order) break;
    for (const auto& [kb, cb] : b.terms_) {
      const int base = ka.power + kb.power;
      if (base > order) break;
      for (std::size_t l = 0; l < Legs; ++l)
        leg_product(alg, ka.exps.data() + l * w, kb.exps.data() + l * w, order - base, legs[l]);
      const Scalar c = ca * cb;

      // Cartesian product over legs, pruned by the remaining power budget.
      std::array<std::size_t, Legs> idx{};
      std::size_t depth = 0;
      std::array<int, Legs + 1> power{};
      power[0] = base;
      while (true) {
        if (idx[depth] == legs[depth].size()) {
          if (depth == 0) break;
          idx[depth] = 0;
          --depth;
          ++idx[depth];
          continue;
        }
        const LegTerm& t = legs[depth][idx[depth]];
        const int p = power[depth] + t.power;
        if (p > order) {
          // leg lists are sorted by power; the rest of this level is out of budget
          idx[depth] = legs[depth].size();
          continue;
        }
        std::copy(t.exps.begin(), t.exps.end(), key.begin() + depth * w);
        power[depth + 1] = p;
        if (depth + 1 < Legs) {
          ++depth;
          continue;
        }
        Scalar coef = c;
        for (std::size_t l = 0; l < Legs; ++l)
          if (legs[l][idx[l]].coef) coef *= *legs[l][idx[l]].coef;
        auto [it, inserted] = out.terms_.try_emplace(TermKey{p, key}, coef);
        if (!inserted) it->second += coef;
        ++idx[depth];
      }
    }
  }
  std::erase_if(out.terms_, [](const auto& kv) { return kv.second == 0; });
  return out;
}

using Element = Tensor<1>;
using Tensor2 = Tensor<2>;
using Tensor3 = Tensor<3>;

/// Generator H_i (0-based) as an element.
inline Element generator_h(const AlgebraPtr& alg, int order, std::size_t i) {
  if (i >= alg->m()) throw malformed_word_error("H generator index out of range");
  Element e(alg, order);
  Exps x(alg->width(), 0);
  x[i] = 1;
  e.add_term(0, x, Scalar(1));
  return e;
}

/// Generator X_mu (0-based) as an element.
inline Element generator_x(const AlgebraPtr& alg, int order, std::size_t mu) {
  if (mu >= alg->n()) throw malformed_word_error("X generator index out of range");
  Element e(alg, order);
  Exps x(alg->width(), 0);
  x[alg->m() + mu] = 1;
  e.add_term(0, x, Scalar(1));
  return e;
}

/// Sum_{k=0..N} a^k / k!. Requires every term of `a` to carry hbar^{>=1}.
template <std::size_t L>
Tensor<L> exp_truncated(const Tensor<L>& a) {
  for (const auto& [k, c] : a.terms())
    if (k.power == 0) throw non_truncatable_error("exp_truncated: exponent has a deformation-power-0 term");
  Tensor<L> sum = Tensor<L>::unit(a.algebra(), a.order());
  Tensor<L> term = sum;
  for (int k = 1; k <= a.order(); ++k) {
    term = term * a;
    if (term.is_zero()) break;
    term *= Scalar(1, k);
    sum += term;
  }
  return sum;
}

/// Outer product a (x) b, legs concatenated.
template <std::size_t A, std::size_t B>
Tensor<A + B> outer(const Tensor<A>& a, const Tensor<B>& b) {
  if (a.order() != b.order()) throw shape_error("outer: truncation orders differ");
  if (a.algebra() != b.algebra()) throw shape_error("outer: factors belong to different algebras");
  Tensor<A + B> out(a.algebra(), a.order());
  for (const auto& [ka, ca] : a.terms())
    for (const auto& [kb, cb] : b.terms()) {
      if (ka.power + kb.power > a.order()) break;
      Exps e = ka.exps;
      e.insert(e.end(), kb.exps.begin(), kb.exps.end());
      out.add_term(ka.power + kb.power, e, ca * cb);
    }
  return out;
}

/// Result leg `to[l]` receives source leg l; the remaining legs are units.
template <std::size_t To, std::size_t From>
Tensor<To> embed(const Tensor<From>& t, const std::array<std::size_t, From>& to) {
  const std::size_t w = t.alg().width();
  Tensor<To> out(t.algebra(), t.order());
  for (const auto& [k, c] : t.terms()) {
    Exps e(To * w, 0);
    for (std::size_t l = 0; l < From; ++l) {
      if (to[l] >= To) throw shape_error("embed: target leg out of range");
      std::copy(k.exps.begin() + l * w, k.exps.begin() + (l + 1) * w, e.begin() + to[l] * w);
    }
    out.add_term(k.power, e, c);
  }
  return out;
}

/// Leg permutation: leg l of the input becomes leg perm[l] of the output.
template <std::size_t L>
Tensor<L> permute_legs(const Tensor<L>& t, const std::array<std::size_t, L>& perm) {
  return embed<L, L>(t, perm);
}

/// The flip tau(a (x) b) = b (x) a.
inline Tensor2 swap_legs(const Tensor2& t) { return permute_legs<2>(t, {1, 0}); }

/// Commutator ab - ba.
template <std::size_t L>
Tensor<L> commutator(const Tensor<L>& a, const Tensor<L>& b) {
  return a * b - b * a;
}

/// True when no term carries an X factor.
inline bool is_pure_h(const Element& e) {
  const std::size_t m = e.alg().m();
  for (const auto& [k, c] : e.terms())
    for (std::size_t i = m; i < k.exps.size(); ++i)
      if (k.exps[i]) return false;
  return true;
}

}  // namespace qtwist
