#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <vector>

#include "qtwist/derived.hpp"
#include "qtwist/error.hpp"
#include "qtwist/series_matrix.hpp"
#include "qtwist/tensor.hpp"

namespace qtwist {

/// Derived structure plus the pure-H matrix series that appear in the
/// coproduct and in the classical basis, and memoized coproducts of PBW
/// monomials. Read-only after construction (the memo is internally locked).
class HopfContext {
public:
  explicit HopfContext(std::shared_ptr<const DerivedStructure> d) : d_(std::move(d)) {
    const int N = d_->order;
    const auto& alg = d_->algebra;
    const std::size_t n = d_->spec.n;
    auto series = [&](const std::vector<Scalar>& f, const Scalar& factor) {
      if (N == 0) return SeriesMatrix::identity(alg, N, n) * f[0];
      return series_apply(f, alpha_h_matrix(d_->alpha_up, alg, N, factor));
    };
    exp2_ = series(taylor::exp(N + 1), Scalar(2));
    exp_neg2_ = series(taylor::exp(N + 1, Scalar(-1)), Scalar(2));
    one_minus_exp_neg2_ = series(taylor::one_minus_exp_neg(N + 1), Scalar(2));
    exp1_ = series(taylor::exp(N + 1), Scalar(1));
    exp_neg1_ = series(taylor::exp(N + 1, Scalar(-1)), Scalar(1));
  }

  static std::shared_ptr<const HopfContext> from_spec(const AlgebraSpec& s, std::optional<int> order = {}) {
    return std::make_shared<const HopfContext>(derive_alpha(s, order));
  }

  const DerivedStructure& derived() const noexcept { return *d_; }
  const AlgebraSpec& spec() const noexcept { return d_->spec; }
  const AlgebraPtr& algebra() const noexcept { return d_->algebra; }
  int order() const noexcept { return d_->order; }
  std::size_t m() const noexcept { return d_->spec.m; }
  std::size_t n() const noexcept { return d_->spec.n; }

  Element unit() const { return Element::unit(algebra(), order()); }
  Element h(std::size_t i) const { return generator_h(algebra(), order(), i); }
  Element x(std::size_t mu) const { return generator_x(algebra(), order(), mu); }

  /// H^mu = hbar r^{i mu} H_i.
  Element lifted_h(std::size_t mu) const {
    Element e(algebra(), order());
    for (std::size_t i = 0; i < m(); ++i)
      if (spec().r(i, mu) != 0) e += h(i) * spec().r(i, mu);
    return e.shifted(1);
  }

  /// e^{2 alpha.H}
  const SeriesMatrix& exp_2alpha_h() const noexcept { return exp2_; }
  /// e^{-2 alpha.H}
  const SeriesMatrix& exp_neg_2alpha_h() const noexcept { return exp_neg2_; }
  /// I - e^{-2 alpha.H}
  const SeriesMatrix& one_minus_exp_neg_2alpha_h() const noexcept { return one_minus_exp_neg2_; }
  /// e^{alpha.H}, e^{-alpha.H} (change of variables to the Y generators)
  const SeriesMatrix& exp_alpha_h() const noexcept { return exp1_; }
  const SeriesMatrix& exp_neg_alpha_h() const noexcept { return exp_neg1_; }

  /// Delta_alpha(H_i) = H_i (x) 1 + 1 (x) H_i.
  Tensor2 coproduct_h(std::size_t i) const {
    const Element u = unit();
    return outer(h(i), u) + outer(u, h(i));
  }

  /// Delta_alpha(X_mu) = (e^{2 alpha.H})^nu_mu (x) X_nu + X_mu (x) 1.
  Tensor2 coproduct_x(std::size_t mu) const {
    Tensor2 t = outer(x(mu), unit());
    for (std::size_t nu = 0; nu < n(); ++nu)
      if (!exp2_(nu, mu).is_zero()) t += outer(exp2_(nu, mu), x(nu));
    return t;
  }

  /// Delta_alpha of one PBW monomial (single-leg exponent vector).
  const Tensor2& coproduct_of_monomial(const Exps& e) const {
    {
      std::shared_lock lock(memo_mutex_);
      auto it = memo_.find(e);
      if (it != memo_.end()) return it->second;
    }
    Tensor2 value = compute_monomial_coproduct(e);
    std::unique_lock lock(memo_mutex_);
    return memo_.try_emplace(e, std::move(value)).first->second;
  }

private:
  Tensor2 compute_monomial_coproduct(const Exps& e) const {
    const std::size_t w = m() + n();
    std::size_t last = w;
    while (last > 0 && e[last - 1] == 0) --last;
    if (last == 0) return Tensor2::unit(algebra(), order());
    --last;
    Exps prefix = e;
    --prefix[last];
    const Tensor2 g = last < m() ? coproduct_h(last) : coproduct_x(last - m());
    return coproduct_of_monomial(prefix) * g;
  }

  std::shared_ptr<const DerivedStructure> d_;
  SeriesMatrix exp2_, exp_neg2_, one_minus_exp_neg2_, exp1_, exp_neg1_;

  mutable std::shared_mutex memo_mutex_;
  mutable std::map<Exps, Tensor2> memo_;
};

using HopfContextPtr = std::shared_ptr<const HopfContext>;

/// Applies Delta_alpha to leg `leg`, producing one more leg. The result's
/// legs are (0..leg-1, Delta-left, Delta-right, leg+1..).
template <std::size_t L>
Tensor<L + 1> coproduct_on_leg(const HopfContext& ctx, const Tensor<L>& t, std::size_t leg) {
  if (leg >= L) throw shape_error("coproduct_on_leg: leg out of range");
  const std::size_t w = ctx.m() + ctx.n();
  Tensor<L + 1> out(t.algebra(), t.order());
  for (const auto& [k, c] : t.terms()) {
    const Exps mono(k.exps.begin() + leg * w, k.exps.begin() + (leg + 1) * w);
    for (const auto& [dk, dc] : ctx.coproduct_of_monomial(mono).terms()) {
      if (k.power + dk.power > t.order()) break;
      Exps e(k.exps.begin(), k.exps.begin() + leg * w);
      e.insert(e.end(), dk.exps.begin(), dk.exps.end());
      e.insert(e.end(), k.exps.begin() + (leg + 1) * w, k.exps.end());
      out.add_term(k.power + dk.power, e, c * dc);
    }
  }
  return out;
}

/// Delta_alpha, extended from the generators as an algebra homomorphism.
inline Tensor2 coproduct(const HopfContext& ctx, const Element& a) { return coproduct_on_leg(ctx, a, 0); }

/// epsilon(a) per deformation power: entry k is the hbar^k coefficient of the unit.
inline std::vector<Scalar> counit(const Element& a) {
  std::vector<Scalar> out(a.order() + 1);
  for (const auto& [k, c] : a.terms()) {
    bool unit = true;
    for (auto v : k.exps) unit = unit && v == 0;
    if (unit) out[k.power] = c;
  }
  return out;
}

/// Applies epsilon to leg `leg`, removing it.
template <std::size_t L>
Tensor<L - 1> counit_on_leg(const Tensor<L>& t, std::size_t leg) {
  static_assert(L >= 2, "counit_on_leg needs at least two legs");
  if (leg >= L) throw shape_error("counit_on_leg: leg out of range");
  const std::size_t w = t.alg().width();
  Tensor<L - 1> out(t.algebra(), t.order());
  for (const auto& [k, c] : t.terms()) {
    bool unit = true;
    for (std::size_t i = leg * w; i < (leg + 1) * w; ++i) unit = unit && k.exps[i] == 0;
    if (!unit) continue;
    Exps e(k.exps.begin(), k.exps.begin() + leg * w);
    e.insert(e.end(), k.exps.begin() + (leg + 1) * w, k.exps.end());
    out.add_term(k.power, e, c);
  }
  return out;
}

/// hbar r^{i mu} H_i (x) X_mu, the exponent of Phi.
inline Tensor2 phi_exponent(const HopfContext& ctx) {
  Tensor2 t(ctx.algebra(), ctx.order());
  for (std::size_t i = 0; i < ctx.m(); ++i)
    for (std::size_t mu = 0; mu < ctx.n(); ++mu)
      if (ctx.spec().r(i, mu) != 0) t += outer(ctx.h(i), ctx.x(mu)) * ctx.spec().r(i, mu);
  return t.shifted(1);
}

/// Phi = exp(r^{i mu} H_i (x) X_mu).
inline Tensor2 build_phi(const HopfContext& ctx) { return exp_truncated(phi_exponent(ctx)); }

/// F = Phi^{-1} = exp(-r^{i mu} H_i (x) X_mu).
inline Tensor2 build_twist_F(const HopfContext& ctx) { return exp_truncated(-phi_exponent(ctx)); }

/// R = exp(r^{i mu} X_mu (x) H_i) exp(-r^{i mu} H_i (x) X_mu).
inline Tensor2 build_R(const HopfContext& ctx) {
  const Tensor2 a = phi_exponent(ctx);
  return exp_truncated(swap_legs(a)) * exp_truncated(-a);
}

/// Phi^{-1} Delta_alpha(a) Phi.
inline Tensor2 twisted_coproduct(const HopfContext& ctx, const Element& a, const Tensor2& phi, const Tensor2& F) {
  return F * coproduct(ctx, a) * phi;
}

inline Tensor2 twisted_coproduct(const HopfContext& ctx, const Element& a) {
  return twisted_coproduct(ctx, a, build_phi(ctx), build_twist_F(ctx));
}

/// a (x) 1 + 1 (x) a
inline Tensor2 primitive(const Element& a) {
  const Element u = Element::unit(a.algebra(), a.order());
  return outer(a, u) + outer(u, a);
}

/// K^mu = xi^nu (I - e^{-2 alpha.H})^mu_nu.
inline std::vector<Element> classical_K(const HopfContext& ctx, const std::vector<Scalar>& xi) {
  if (xi.size() != ctx.n()) throw shape_error("classical_K: xi must have n entries");
  const auto& M = ctx.one_minus_exp_neg_2alpha_h();
  std::vector<Element> K;
  for (std::size_t mu = 0; mu < ctx.n(); ++mu) {
    Element k(ctx.algebra(), ctx.order());
    for (std::size_t nu = 0; nu < ctx.n(); ++nu)
      if (xi[nu] != 0) k += M(mu, nu) * xi[nu];
    K.push_back(std::move(k));
  }
  return K;
}

inline bool is_poincare_context(const HopfContext& ctx) {
  return ctx.spec().name == presets::poincare_null_plane && ctx.m() == 3 && ctx.n() == 3;
}

/// Y_nu = X_mu (e^{-alpha.H})^mu_nu, the inverse of X_mu = Y_nu (e^{alpha.H})^nu_mu.
inline std::vector<Element> y_generators(const HopfContext& ctx) {
  if (!is_poincare_context(ctx))
    throw unsupported_preset_error("the Y-generator layer is defined for the poincare-null-plane preset only");
  const auto& E = ctx.exp_neg_alpha_h();
  std::vector<Element> Y;
  for (std::size_t nu = 0; nu < ctx.n(); ++nu) {
    Element y(ctx.algebra(), ctx.order());
    for (std::size_t mu = 0; mu < ctx.n(); ++mu)
      if (!E(mu, nu).is_zero()) y += ctx.x(mu) * E(mu, nu);
    Y.push_back(std::move(y));
  }
  return Y;
}

}  // namespace qtwist
