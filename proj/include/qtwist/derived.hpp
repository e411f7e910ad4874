#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qtwist/algebra.hpp"
#include "qtwist/format.hpp"
#include "qtwist/linalg.hpp"
#include "qtwist/series_matrix.hpp"
#include "qtwist/spec.hpp"
#include "qtwist/tensor.hpp"

namespace qtwist {

/// The alpha/beta tensors of a spec.
///   alpha_up[i](mu, nu)  = (alpha^i)^mu_nu = 1/2 r^{j mu} B^i_{j nu}
///   r_low(i, mu)         = r_{i mu}, with r^{i mu} r_{j mu} = delta^i_j
///   alpha_low[mu](rho,nu) = alpha^rho_{mu nu} = r_{i mu} (alpha^i)^rho_nu
///   beta[mu](i, j)       = B^i_{j mu}
struct AlphaTensors {
  std::vector<RationalMatrix> alpha_up;
  RationalMatrix r_low;
  std::vector<RationalMatrix> alpha_low;
  std::vector<RationalMatrix> beta;
};

inline std::vector<RationalMatrix> compute_alpha_up(const AlgebraSpec& s) {
  std::vector<RationalMatrix> alpha(s.m, RationalMatrix(s.n, s.n));
  for (std::size_t i = 0; i < s.m; ++i)
    for (std::size_t mu = 0; mu < s.n; ++mu)
      for (std::size_t nu = 0; nu < s.n; ++nu) {
        Scalar v = 0;
        for (std::size_t j = 0; j < s.m; ++j) v += s.r(j, mu) * s.B(i, j, nu);
        alpha[i](mu, nu) = v / 2;
      }
  return alpha;
}

inline std::vector<RationalMatrix> compute_beta(const AlgebraSpec& s) {
  std::vector<RationalMatrix> beta(s.n, RationalMatrix(s.m, s.m));
  for (std::size_t mu = 0; mu < s.n; ++mu)
    for (std::size_t i = 0; i < s.m; ++i)
      for (std::size_t j = 0; j < s.m; ++j) beta[mu](i, j) = s.B(i, j, mu);
  return beta;
}

/// Throws spec_error when r is degenerate.
inline AlphaTensors compute_alpha_tensors(const AlgebraSpec& s) {
  s.check_shape();
  AlphaTensors t;
  t.alpha_up = compute_alpha_up(s);
  t.beta = compute_beta(s);
  try {
    t.r_low = matrix_inverse(s.r).transpose();
  } catch (const singular_matrix_error&) {
    throw spec_error(
        "r is degenerate; restricting the twist to the image subalgebra r(L*) is not supported");
  }
  t.alpha_low.assign(s.n, RationalMatrix(s.n, s.n));
  for (std::size_t mu = 0; mu < s.n; ++mu)
    for (std::size_t rho = 0; rho < s.n; ++rho)
      for (std::size_t nu = 0; nu < s.n; ++nu) {
        Scalar v = 0;
        for (std::size_t i = 0; i < s.m; ++i) v += t.r_low(i, mu) * t.alpha_up[i](rho, nu);
        t.alpha_low[mu](rho, nu) = v;
      }
  return t;
}

/// factor * hbar * (alpha . H), with (alpha . H)^mu_nu = sum_i (alpha^i)^mu_nu H_i.
inline SeriesMatrix alpha_h_matrix(const std::vector<RationalMatrix>& alpha_up, const AlgebraPtr& alg, int order,
                                   const Scalar& factor) {
  const std::size_t n = alg->n();
  SeriesMatrix M(alg, order, n);
  for (std::size_t i = 0; i < alpha_up.size(); ++i) {
    const Element h = generator_h(alg, order, i).shifted(1);
    for (std::size_t mu = 0; mu < n; ++mu)
      for (std::size_t nu = 0; nu < n; ++nu)
        if (alpha_up[i](mu, nu) != 0) M(mu, nu) += h * (factor * alpha_up[i](mu, nu));
  }
  return M;
}

/// Everything derivable from a valid spec: alpha tensors plus the deformed
/// algebra and its commutator table
///   [H_j, X_mu] = ((e^{2 alpha.H} - I)/(2 alpha.H))^nu_mu B^i_{j nu} H_i,
/// with hbar attached to alpha.
struct DerivedStructure : AlphaTensors {
  AlgebraSpec spec;
  int order = 0;
  AlgebraPtr algebra;
  std::vector<Element> commutator_table;  // index j * n + mu

  const Element& commutator(std::size_t j, std::size_t mu) const { return commutator_table.at(j * spec.n + mu); }
};

inline Algebra::PureHPoly to_pure_h_poly(const Element& e) {
  Algebra::PureHPoly p;
  const std::size_t m = e.alg().m();
  for (const auto& [k, c] : e.terms()) p.push_back({k.power, Exps(k.exps.begin(), k.exps.begin() + m), c});
  return p;
}

/// Fills every DerivedStructure field for truncation order `order`
/// (defaults to the spec's). Throws spec_error on degenerate r.
inline std::shared_ptr<const DerivedStructure> derive_alpha(const AlgebraSpec& s, std::optional<int> order = {}) {
  auto d = std::make_shared<DerivedStructure>();
  static_cast<AlphaTensors&>(*d) = compute_alpha_tensors(s);
  d->spec = s;
  d->order = order.value_or(s.order);
  if (d->order < 0) throw spec_error("order must be non-negative");
  const int N = d->order;
  const auto names = s.names();
  auto flat = Algebra::abelian(s.m, s.n, N, names);

  // f(2 hbar alpha.H) with f(t) = (e^t - 1)/t; valuation of the argument is 1.
  SeriesMatrix f = SeriesMatrix::identity(flat, N, s.n);
  if (N > 0) f = series_apply(taylor::expm1_over_t(N + 1), alpha_h_matrix(d->alpha_up, flat, N, Scalar(2)));

  std::vector<Element> table;
  std::vector<Algebra::PureHPoly> polys;
  for (std::size_t j = 0; j < s.m; ++j)
    for (std::size_t mu = 0; mu < s.n; ++mu) {
      Element c(flat, N);
      for (std::size_t nu = 0; nu < s.n; ++nu) {
        Element bh(flat, N);
        for (std::size_t i = 0; i < s.m; ++i)
          if (s.B(i, j, nu) != 0) bh += generator_h(flat, N, i) * s.B(i, j, nu);
        if (!bh.is_zero() && !f(nu, mu).is_zero()) c += f(nu, mu) * bh;
      }
      polys.push_back(to_pure_h_poly(c));
      table.push_back(std::move(c));
    }
  d->algebra = std::make_shared<const Algebra>(s.m, s.n, N, names, std::move(polys));
  for (auto& c : table) c = c.rehomed(d->algebra, N);
  d->commutator_table = std::move(table);
  return d;
}

/// U(L) itself: [H_j, X_mu] = B^i_{j mu} H_i, no deformation.
inline AlgebraPtr classical_algebra(const AlgebraSpec& s, int order = 0) {
  std::vector<Algebra::PureHPoly> polys;
  for (std::size_t j = 0; j < s.m; ++j)
    for (std::size_t mu = 0; mu < s.n; ++mu) {
      Algebra::PureHPoly p;
      for (std::size_t i = 0; i < s.m; ++i)
        if (s.B(i, j, mu) != 0) {
          Exps h(s.m, 0);
          h[i] = 1;
          p.push_back({0, h, s.B(i, j, mu)});
        }
      polys.push_back(std::move(p));
    }
  return std::make_shared<const Algebra>(s.m, s.n, order, s.names(), std::move(polys));
}

/// [[r, r]] = [r12, r13] + [r12, r23] + [r13, r23] for the classical
/// r = r^{i mu}(X_mu (x) H_i - H_i (x) X_mu), computed in U(L)^{(x)3}.
inline Tensor3 cybe_residual(const AlgebraSpec& s) {
  s.check_shape();
  auto alg = classical_algebra(s, 0);
  Tensor2 r(alg, 0);
  for (std::size_t i = 0; i < s.m; ++i)
    for (std::size_t mu = 0; mu < s.n; ++mu) {
      if (s.r(i, mu) == 0) continue;
      const Element h = generator_h(alg, 0, i);
      const Element x = generator_x(alg, 0, mu);
      r += (outer(x, h) - outer(h, x)) * s.r(i, mu);
    }
  const Tensor3 r12 = embed<3>(r, {0, 1});
  const Tensor3 r13 = embed<3>(r, {0, 2});
  const Tensor3 r23 = embed<3>(r, {1, 2});
  return commutator(r12, r13) + commutator(r12, r23) + commutator(r13, r23);
}

/// One named precondition check.
struct ValidationCheck {
  std::string name;
  bool pass = true;
  std::size_t violations = 0;
  std::string witness;  // empty on pass
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;

  bool passed() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  const ValidationCheck* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

namespace detail {

struct ViolationCounter {
  ValidationCheck check;

  explicit ViolationCounter(std::string name) { check.name = std::move(name); }

  void violation(const std::string& where) {
    if (check.pass) check.witness = where;
    check.pass = false;
    ++check.violations;
  }
};

inline std::string index_tuple(std::initializer_list<std::string> parts) {
  std::string s = "(";
  bool first = true;
  for (const auto& p : parts) {
    if (!first) s += ",";
    s += p;
    first = false;
  }
  return s + ")";
}

}  // namespace detail

/// Runs the six classical preconditions in a fixed order and never throws
/// for algebraic failures: (1) jacobi, (2) r_invertible, (3) consistency,
/// (4) alpha_commute, (5) lowered_symmetry, (6) cybe.
inline ValidationReport validation_checks(const AlgebraSpec& s) {
  s.check_shape();
  const auto names = s.names();
  auto H = [&](std::size_t i) { return names[i]; };
  auto X = [&](std::size_t mu) { return names[s.m + mu]; };
  ValidationReport rep;
  const auto beta = compute_beta(s);
  const auto alpha = compute_alpha_up(s);

  {
    detail::ViolationCounter c("jacobi");
    for (std::size_t mu = 0; mu < s.n; ++mu)
      for (std::size_t nu = mu + 1; nu < s.n; ++nu) {
        const auto d = beta[mu] * beta[nu] - beta[nu] * beta[mu];
        for (std::size_t i = 0; i < s.m; ++i)
          for (std::size_t j = 0; j < s.m; ++j)
            if (d(i, j) != 0)
              c.violation("[beta_" + X(mu) + ", beta_" + X(nu) + "] entry " + detail::index_tuple({H(i), H(j)}) +
                          " = " + to_string(d(i, j)));
      }
    rep.checks.push_back(c.check);
  }

  const bool r_ok = matrix_rank(s.r) == s.m && s.m == s.n;
  {
    detail::ViolationCounter c("r_invertible");
    if (!r_ok) c.violation("rank(r) = " + std::to_string(matrix_rank(s.r)) + " < " + std::to_string(s.m));
    rep.checks.push_back(c.check);
  }

  {
    detail::ViolationCounter c("consistency");
    for (std::size_t i = 0; i < s.m; ++i)
      for (std::size_t j = i + 1; j < s.m; ++j)
        for (std::size_t k = 0; k < s.m; ++k)
          for (std::size_t nu = 0; nu < s.n; ++nu) {
            Scalar lhs = 0, rhs = 0;
            for (std::size_t mu = 0; mu < s.n; ++mu) {
              lhs += alpha[i](mu, nu) * s.B(j, k, mu);
              rhs += alpha[j](mu, nu) * s.B(i, k, mu);
            }
            if (lhs != rhs) c.violation("(i,j,k,nu)=" + detail::index_tuple({H(i), H(j), H(k), X(nu)}));
          }
    rep.checks.push_back(c.check);
  }

  {
    detail::ViolationCounter c("alpha_commute");
    for (std::size_t i = 0; i < s.m; ++i)
      for (std::size_t j = i + 1; j < s.m; ++j) {
        const auto d = alpha[i] * alpha[j] - alpha[j] * alpha[i];
        if (!d.is_zero()) c.violation("[alpha^" + H(i) + ", alpha^" + H(j) + "] != 0");
      }
    rep.checks.push_back(c.check);
  }

  {
    detail::ViolationCounter c("lowered_symmetry");
    if (!r_ok) {
      c.violation("requires invertible r");
    } else {
      const auto t = compute_alpha_tensors(s);
      for (std::size_t rho = 0; rho < s.n; ++rho)
        for (std::size_t mu = 0; mu < s.n; ++mu)
          for (std::size_t nu = mu + 1; nu < s.n; ++nu)
            if (t.alpha_low[mu](rho, nu) != t.alpha_low[nu](rho, mu))
              c.violation("alpha^" + X(rho) + "_{" + X(mu) + " " + X(nu) + "} != alpha^" + X(rho) + "_{" + X(nu) +
                          " " + X(mu) + "}");
    }
    rep.checks.push_back(c.check);
  }

  {
    detail::ViolationCounter c("cybe");
    const Tensor3 res = cybe_residual(s);
    if (!res.is_zero()) {
      c.check.pass = false;
      c.check.violations = res.size();
      const auto& [k, v] = *res.terms().begin();
      c.check.witness = "[[r,r]] term " + format_term(res.alg(), 3, k, v);
    }
    rep.checks.push_back(c.check);
  }
  return rep;
}

/// validation_checks, but a degenerate r is a hard error.
inline ValidationReport validate_spec(const AlgebraSpec& s) {
  auto rep = validation_checks(s);
  if (!rep.find("r_invertible")->pass)
    throw spec_error("r is degenerate; restricting the twist to the image subalgebra r(L*) is not supported");
  return rep;
}

struct HPrimeRank {
  std::size_t rank = 0;
  std::optional<std::vector<Scalar>> center_witness;  // xi_0 with xi_0^mu X_mu central
};

/// dim H' = dim [H, V]: rank of the (n*n) x n matrix M[(mu,nu)][sigma] =
/// 2 alpha^mu_{sigma nu}. By the lower-index symmetry, a kernel vector xi_0
/// makes ad(xi_0^sigma X_sigma) vanish on V, i.e. X_0 is central.
inline HPrimeRank h_prime_rank(const AlphaTensors& t, std::size_t n) {
  RationalMatrix M(n * n, n);
  for (std::size_t mu = 0; mu < n; ++mu)
    for (std::size_t nu = 0; nu < n; ++nu)
      for (std::size_t sigma = 0; sigma < n; ++sigma) M(mu * n + nu, sigma) = 2 * t.alpha_low[sigma](mu, nu);
  HPrimeRank out;
  out.rank = matrix_rank(M);
  if (out.rank < n) out.center_witness = kernel_vector(M);
  return out;
}

inline HPrimeRank h_prime_rank(const AlgebraSpec& s) { return h_prime_rank(compute_alpha_tensors(s), s.n); }

/// First-order part of xi -> K: K^mu = 2 xi^nu (alpha^i)^mu_nu H_i + O(hbar^2).
inline RationalMatrix xi_to_k_first_order(const std::vector<RationalMatrix>& alpha_up, const std::vector<Scalar>& xi) {
  const std::size_t m = alpha_up.size();
  const std::size_t n = xi.size();
  RationalMatrix A(n, m);
  for (std::size_t mu = 0; mu < n; ++mu)
    for (std::size_t i = 0; i < m; ++i) {
      Scalar v = 0;
      for (std::size_t nu = 0; nu < n; ++nu) v += xi[nu] * alpha_up[i](mu, nu);
      A(mu, i) = 2 * v;
    }
  return A;
}

/// Returns s.xi when present and admissible; otherwise the first of
/// e_0, e_0/2, e_1, e_1/2, ... whose first-order K map has full rank.
inline std::vector<Scalar> choose_xi(const AlgebraSpec& s) {
  const auto t = compute_alpha_tensors(s);
  const auto hp = h_prime_rank(t, s.n);
  if (hp.rank < s.m) {
    std::vector<std::string> w;
    if (hp.center_witness)
      for (const auto& v : *hp.center_witness) w.push_back(to_string(v));
    throw no_valid_xi_error("no valid xi: V meets the center of L (dim H' = " + std::to_string(hp.rank) + " < " +
                                std::to_string(s.m) + ")",
                            std::move(w));
  }
  if (s.xi) {
    if (matrix_rank(xi_to_k_first_order(t.alpha_up, *s.xi)) != s.m)
      throw no_valid_xi_error("the declared xi does not give independent K generators", {});
    return *s.xi;
  }
  for (std::size_t idx = 0; idx < s.n; ++idx)
    for (const Scalar& scale : {Scalar(1), Scalar(1, 2)}) {
      std::vector<Scalar> xi(s.n, 0);
      xi[idx] = scale;
      if (matrix_rank(xi_to_k_first_order(t.alpha_up, xi)) == s.m) return xi;
    }
  throw no_valid_xi_error("no scaled basis vector gives independent K generators", {});
}

}  // namespace qtwist
