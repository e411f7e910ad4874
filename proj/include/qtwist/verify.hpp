#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "qtwist/derived.hpp"
#include "qtwist/format.hpp"
#include "qtwist/hopf.hpp"

namespace qtwist {

/// Outcome of one exact identity check. Pass iff the residual is empty.
struct CheckResult {
  std::string name;
  bool pass = true;
  std::size_t residual_terms = 0;
  int max_order = 0;
  double elapsed_ms = 0;
  std::optional<std::string> witness;
};

struct CheckReport {
  std::string spec_name;
  int order = 0;
  std::vector<CheckResult> checks;

  bool overall() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  const CheckResult* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

/// The objects under test. Phi, F and R start as the engine's constructions;
/// tests may replace any of them to confirm the checks notice.
struct Construction {
  HopfContextPtr ctx;
  Tensor2 phi;
  Tensor2 F;
  Tensor2 rmat;
  std::vector<Scalar> xi;

  static Construction build(HopfContextPtr ctx) {
    Construction c;
    c.phi = build_phi(*ctx);
    c.F = build_twist_F(*ctx);
    c.rmat = build_R(*ctx);
    try {
      c.xi = choose_xi(ctx->spec());
    } catch (const no_valid_xi_error&) {
      c.xi.assign(ctx->n(), Scalar(0));  // K = 0: the basis checks hold vacuously
    }
    c.ctx = std::move(ctx);
    return c;
  }
};

namespace detail {

/// Sums residual term counts over labelled parts; the witness is the
/// smallest offending term of the first failing part.
class Residuals {
public:
  Residuals(std::string name, int order) { result_.name = std::move(name), result_.max_order = order; }

  template <std::size_t L>
  void add(const std::string& label, const Tensor<L>& residual) {
    if (residual.is_zero()) return;
    if (!result_.witness) {
      const auto& [k, c] = *residual.terms().begin();
      result_.witness = label + ": " + format_term(residual.alg(), L, k, c);
    }
    result_.pass = false;
    result_.residual_terms += residual.size();
  }

  void add_violations(std::size_t count, const std::string& witness) {
    if (count == 0) return;
    if (!result_.witness) result_.witness = witness;
    result_.pass = false;
    result_.residual_terms += count;
  }

  CheckResult take() { return std::move(result_); }

private:
  CheckResult result_;
};

template <typename F>
CheckResult timed(F&& f) {
  const auto start = std::chrono::steady_clock::now();
  CheckResult r = f();
  r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

inline std::string gen_name(const HopfContext& ctx, std::size_t id) { return ctx.algebra()->names()[id]; }

}  // namespace detail

/// (Delta_alpha (x) id)(Phi) Phi_12 = (id (x) Delta_alpha)(Phi) Phi_23.
inline CheckResult check_twist_equation(const Construction& c) {
  return detail::timed([&] {
    const auto& ctx = *c.ctx;
    const Tensor3 lhs = coproduct_on_leg(ctx, c.phi, 0) * embed<3>(c.phi, {0, 1});
    const Tensor3 rhs = coproduct_on_leg(ctx, c.phi, 1) * embed<3>(c.phi, {1, 2});
    detail::Residuals r("twist_equation", ctx.order());
    r.add("lhs - rhs", lhs - rhs);
    return r.take();
  });
}

/// R_12 R_13 R_23 = R_23 R_13 R_12.
inline CheckResult check_qybe(const Construction& c) {
  return detail::timed([&] {
    const Tensor3 r12 = embed<3>(c.rmat, {0, 1});
    const Tensor3 r13 = embed<3>(c.rmat, {0, 2});
    const Tensor3 r23 = embed<3>(c.rmat, {1, 2});
    detail::Residuals r("qybe", c.ctx->order());
    r.add("R12 R13 R23 - R23 R13 R12", r12 * r13 * r23 - r23 * r13 * r12);
    return r.take();
  });
}

/// tau(R) R = 1 (x) 1.
inline CheckResult check_triangularity(const Construction& c) {
  return detail::timed([&] {
    detail::Residuals r("triangularity", c.ctx->order());
    r.add("tau(R) R - 1", swap_legs(c.rmat) * c.rmat - Tensor2::unit(c.ctx->algebra(), c.ctx->order()));
    return r.take();
  });
}

using CoproductFn = std::function<Tensor2(const Element&)>;

/// R Delta_alpha(g) = tau(Delta_alpha(g)) R for every generator g.
inline CheckResult check_intertwine(const Construction& c, const CoproductFn& delta = {}) {
  return detail::timed([&] {
    const auto& ctx = *c.ctx;
    const CoproductFn d = delta ? delta : CoproductFn([&](const Element& a) { return coproduct(ctx, a); });
    detail::Residuals r("intertwine", ctx.order());
    for (std::size_t g = 0; g < ctx.m() + ctx.n(); ++g) {
      const Element gen = g < ctx.m() ? ctx.h(g) : ctx.x(g - ctx.m());
      const Tensor2 dg = d(gen);
      r.add(detail::gen_name(ctx, g), c.rmat * dg - swap_legs(dg) * c.rmat);
    }
    return r.take();
  });
}

/// (epsilon (x) id)(Phi) = (id (x) epsilon)(Phi) = 1.
inline CheckResult check_phi_counital(const Construction& c) {
  return detail::timed([&] {
    const Element u = c.ctx->unit();
    detail::Residuals r("phi_counital", c.ctx->order());
    r.add("(eps x id)(Phi) - 1", counit_on_leg(c.phi, 0) - u);
    r.add("(id x eps)(Phi) - 1", counit_on_leg(c.phi, 1) - u);
    return r.take();
  });
}

/// (Delta (x) id) Delta(g) = (id (x) Delta) Delta(g) for every generator.
inline CheckResult check_coassociativity(const Construction& c) {
  return detail::timed([&] {
    const auto& ctx = *c.ctx;
    detail::Residuals r("coassociativity", ctx.order());
    for (std::size_t g = 0; g < ctx.m() + ctx.n(); ++g) {
      const Element gen = g < ctx.m() ? ctx.h(g) : ctx.x(g - ctx.m());
      const Tensor2 d = coproduct(ctx, gen);
      r.add(detail::gen_name(ctx, g), coproduct_on_leg(ctx, d, 0) - coproduct_on_leg(ctx, d, 1));
    }
    return r.take();
  });
}

/// (eps (x) id) Delta(a) = a = (id (x) eps) Delta(a) on generators and on
/// every product of two generators (both orders).
inline CheckResult check_counit_axioms(const Construction& c) {
  return detail::timed([&] {
    const auto& ctx = *c.ctx;
    const std::size_t w = ctx.m() + ctx.n();
    auto gen = [&](std::size_t g) { return g < ctx.m() ? ctx.h(g) : ctx.x(g - ctx.m()); };
    detail::Residuals r("counit_axioms", ctx.order());
    auto test = [&](const std::string& label, const Element& a) {
      const Tensor2 d = coproduct(ctx, a);
      r.add(label + " left", counit_on_leg(d, 0) - a);
      r.add(label + " right", counit_on_leg(d, 1) - a);
    };
    for (std::size_t g = 0; g < w; ++g) test(detail::gen_name(ctx, g), gen(g));
    for (std::size_t a = 0; a < w; ++a)
      for (std::size_t b = 0; b < w; ++b)
        test(detail::gen_name(ctx, a) + "*" + detail::gen_name(ctx, b), gen(a) * gen(b));
    return r.take();
  });
}

/// Stored reference alpha matrices are reproduced from (B, r).
inline CheckResult check_alpha_reference(const Construction& c) {
  return detail::timed([&] {
    const auto& d = c.ctx->derived();
    detail::Residuals r("alpha_reference", d.order);
    if (d.spec.alpha_reference) {
      const auto& ref = *d.spec.alpha_reference;
      const auto& names = c.ctx->algebra()->names();
      for (std::size_t i = 0; i < d.spec.m; ++i) {
        std::size_t bad = 0;
        for (std::size_t mu = 0; mu < d.spec.n; ++mu)
          for (std::size_t nu = 0; nu < d.spec.n; ++nu) bad += d.alpha_up[i](mu, nu) != ref[i](mu, nu);
        r.add_violations(bad, "alpha^" + names[i] + " differs from the reference matrix");
      }
    }
    return r.take();
  });
}

/// hbar^0 slice of every [H_j, X_mu] equals B^i_{j mu} H_i.
inline CheckResult check_classical_limit(const Construction& c) {
  return detail::timed([&] {
    const auto& ctx = *c.ctx;
    const auto& d = ctx.derived();
    detail::Residuals r("classical_limit", ctx.order());
    for (std::size_t j = 0; j < ctx.m(); ++j)
      for (std::size_t mu = 0; mu < ctx.n(); ++mu) {
        Element expected(ctx.algebra(), ctx.order());
        for (std::size_t i = 0; i < ctx.m(); ++i) expected += ctx.h(i) * d.spec.B(i, j, mu);
        const Element slice = d.commutator(j, mu).truncated(0).rehomed(ctx.algebra(), ctx.order());
        const Element actual = commutator(ctx.h(j), ctx.x(mu));
        r.add("[" + detail::gen_name(ctx, j) + "," + detail::gen_name(ctx, ctx.m() + mu) + "] table", slice - expected);
        r.add("[" + detail::gen_name(ctx, j) + "," + detail::gen_name(ctx, ctx.m() + mu) + "] product",
              actual - d.commutator(j, mu));
      }
    return r.take();
  });
}

/// alpha^mu_{rho sigma}(e^{2 alpha.H} - I)^sigma_nu = alpha^mu_{nu sigma}(e^{2 alpha.H} - I)^sigma_rho.
inline CheckResult check_swap_lemma(const Construction& c) {
  return detail::timed([&] {
    const auto& ctx = *c.ctx;
    const auto& low = ctx.derived().alpha_low;  // low[mu](rho, nu) = alpha^rho_{mu nu}
    const std::size_t n = ctx.n();
    const SeriesMatrix E = ctx.exp_2alpha_h() - SeriesMatrix::identity(ctx.algebra(), ctx.order(), n);
    detail::Residuals r("swap_lemma", ctx.order());
    for (std::size_t mu = 0; mu < n; ++mu)
      for (std::size_t rho = 0; rho < n; ++rho)
        for (std::size_t nu = 0; nu < n; ++nu) {
          Element diff(ctx.algebra(), ctx.order());
          for (std::size_t sigma = 0; sigma < n; ++sigma) {
            if (low[rho](mu, sigma) != 0) diff += E(sigma, nu) * low[rho](mu, sigma);
            if (low[nu](mu, sigma) != 0) diff -= E(sigma, rho) * low[nu](mu, sigma);
          }
          r.add("(mu,rho,nu)=(" + std::to_string(mu) + "," + std::to_string(rho) + "," + std::to_string(nu) + ")",
                diff);
        }
    return r.take();
  });
}

/// (a) [K^mu, X_nu] = 2 alpha^mu_{sigma nu} K^sigma;
/// (b) Delta_alpha(K^mu) = K^mu (x) 1 + (e^{-2 alpha.H})^mu_nu (x) K^nu;
/// (c) Phi^{-1} Delta_alpha(g) Phi is primitive for g = K^mu, X_mu.
inline CheckResult check_classical_basis(const Construction& c, const std::vector<Scalar>& xi) {
  return detail::timed([&] {
    const auto& ctx = *c.ctx;
    const auto& low = ctx.derived().alpha_low;
    const std::size_t n = ctx.n();
    const auto K = classical_K(ctx, xi);
    const auto& En = ctx.exp_neg_2alpha_h();
    detail::Residuals r("classical_basis", ctx.order());
    for (std::size_t mu = 0; mu < n; ++mu) {
      const std::string kname = "K" + std::to_string(mu + 1);
      for (std::size_t nu = 0; nu < n; ++nu) {
        Element expected(ctx.algebra(), ctx.order());
        for (std::size_t sigma = 0; sigma < n; ++sigma)
          if (low[sigma](mu, nu) != 0) expected += K[sigma] * (2 * low[sigma](mu, nu));
        r.add("[" + kname + "," + detail::gen_name(ctx, ctx.m() + nu) + "]", commutator(K[mu], ctx.x(nu)) - expected);
      }
      const Tensor2 dk = coproduct(ctx, K[mu]);
      Tensor2 expected = outer(K[mu], ctx.unit());
      for (std::size_t nu = 0; nu < n; ++nu)
        if (!En(mu, nu).is_zero() && !K[nu].is_zero()) expected += outer(En(mu, nu), K[nu]);
      r.add("Delta(" + kname + ")", dk - expected);
      r.add("twisted Delta(" + kname + ")", c.F * dk * c.phi - primitive(K[mu]));
      const Element x = ctx.x(mu);
      r.add("twisted Delta(" + detail::gen_name(ctx, ctx.m() + mu) + ")",
            twisted_coproduct(ctx, x, c.phi, c.F) - primitive(x));
    }
    return r.take();
  });
}

/// The displayed commutators and coproducts of the Y generators of the
/// null-plane Poincare algebra, in the lifted variables H^mu.
inline CheckResult check_poincare_section3(const Construction& c) {
  return detail::timed([&] {
    const auto& ctx = *c.ctx;
    const int N = ctx.order();
    const auto Y = y_generators(ctx);
    const Element H1 = ctx.lifted_h(0), H2 = ctx.lifted_h(1), H3 = ctx.lifted_h(2);
    const Element zero(ctx.algebra(), N);
    auto f = [&](const std::vector<Scalar>& coeffs) { return N == 0 ? Element::scalar(ctx.algebra(), N, coeffs[0])
                                                                    : series_apply(coeffs, H3); };
    const Element sinh2 = f(taylor::sinh(N + 1)) * Scalar(2);
    const Element cosh2 = f(taylor::cosh(N + 1)) * Scalar(2);
    const Element ep = f(taylor::exp(N + 1));
    const Element em = f(taylor::exp(N + 1, Scalar(-1)));
    const Element H[3] = {H1, H2, H3};

    detail::Residuals r("poincare_section3", N);
    const Element expected[3][3] = {
        {sinh2, zero, cosh2 * H1},
        {zero, sinh2, cosh2 * H2},
        {zero, zero, sinh2},
    };
    const char* hn[3] = {"H^1", "H^2", "H^3"};
    const char* yn[3] = {"Y1", "Y2", "Y3"};
    for (int mu = 0; mu < 3; ++mu)
      for (int nu = 0; nu < 3; ++nu)
        r.add(std::string("[") + hn[mu] + "," + yn[nu] + "]", commutator(H[mu], Y[nu]) - expected[mu][nu]);

    for (int mu = 0; mu < 3; ++mu) r.add(std::string("Delta(") + hn[mu] + ")", coproduct(ctx, H[mu]) - primitive(H[mu]));
    r.add("Delta(Y1)", coproduct(ctx, Y[0]) - (outer(ep, Y[0]) + outer(Y[0], em)));
    r.add("Delta(Y2)", coproduct(ctx, Y[1]) - (outer(ep, Y[1]) + outer(Y[1], em)));
    const Tensor2 dy3 = outer(ep, Y[2]) + outer(Y[2], em) + outer(ep * H1, Y[0]) - outer(Y[0], H1 * em) +
                        outer(ep * H2, Y[1]) - outer(Y[1], H2 * em);
    r.add("Delta(Y3)", coproduct(ctx, Y[2]) - dy3);
    return r.take();
  });
}

inline std::vector<CheckResult> precondition_results(const ValidationReport& rep, int order) {
  std::vector<CheckResult> out;
  for (const auto& v : rep.checks) {
    CheckResult c;
    c.name = v.name;
    c.pass = v.pass;
    c.residual_terms = v.violations;
    c.max_order = order;
    if (!v.pass) c.witness = v.witness;
    out.push_back(std::move(c));
  }
  return out;
}

enum class Suite { all, twist, ybe, triangular, hopf, classical, section3 };

inline std::optional<Suite> parse_suite(const std::string& s) {
  if (s == "all") return Suite::all;
  if (s == "twist") return Suite::twist;
  if (s == "ybe") return Suite::ybe;
  if (s == "triangular") return Suite::triangular;
  if (s == "hopf") return Suite::hopf;
  if (s == "classical") return Suite::classical;
  if (s == "section3") return Suite::section3;
  return std::nullopt;
}

/// Runs the selected checks, possibly in parallel. Results are stored in a
/// fixed order, so the report does not depend on scheduling.
inline CheckReport run_suite(const Construction& c, Suite suite, unsigned threads = 1) {
  const auto& ctx = *c.ctx;
  const bool poincare = is_poincare_context(ctx);
  if (suite == Suite::section3 && !poincare)
    throw unsupported_preset_error("suite 'section3' needs the poincare-null-plane preset");
  auto want = [&](Suite s) { return suite == Suite::all || suite == s; };

  CheckReport report;
  report.spec_name = ctx.spec().name;
  report.order = ctx.order();

  std::vector<std::function<CheckResult()>> tasks;
  if (want(Suite::classical)) {
    for (auto& r : precondition_results(validation_checks(ctx.spec()), ctx.order())) report.checks.push_back(r);
    if (ctx.spec().alpha_reference) tasks.push_back([&] { return check_alpha_reference(c); });
    tasks.push_back([&] { return check_classical_limit(c); });
    tasks.push_back([&] { return check_swap_lemma(c); });
    tasks.push_back([&] { return check_classical_basis(c, c.xi); });
  }
  if (want(Suite::twist)) tasks.push_back([&] { return check_twist_equation(c); });
  if (want(Suite::hopf)) {
    tasks.push_back([&] { return check_phi_counital(c); });
    tasks.push_back([&] { return check_coassociativity(c); });
    tasks.push_back([&] { return check_counit_axioms(c); });
  }
  if (want(Suite::triangular)) tasks.push_back([&] { return check_triangularity(c); });
  if (want(Suite::ybe)) {
    tasks.push_back([&] { return check_qybe(c); });
    tasks.push_back([&] { return check_intertwine(c); });
  }
  if (want(Suite::section3) && poincare) tasks.push_back([&] { return check_poincare_section3(c); });

  std::vector<CheckResult> results(tasks.size());
  if (threads <= 1 || tasks.size() <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) results[i] = tasks[i]();
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (unsigned t = 0; t < threads && t < tasks.size(); ++t)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
          try {
            results[i] = tasks[i]();
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }
  for (auto& r : results) report.checks.push_back(std::move(r));
  return report;
}

/// End-to-end: validate, derive, build and run. A degenerate r yields a
/// report holding only the (failing) preconditions.
inline CheckReport run_suite_for_spec(const AlgebraSpec& spec, Suite suite, std::optional<int> order = {},
                                      unsigned threads = 1) {
  const int N = order.value_or(spec.order);
  const auto rep = validation_checks(spec);
  if (!rep.find("r_invertible")->pass) {
    CheckReport report;
    report.spec_name = spec.name;
    report.order = N;
    report.checks = precondition_results(rep, N);
    return report;
  }
  auto ctx = HopfContext::from_spec(spec, N);
  return run_suite(Construction::build(std::move(ctx)), suite, threads);
}

}  // namespace qtwist
