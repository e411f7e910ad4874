#include <random>

#include <catch_amalgamated.hpp>

#include "support/oracle.hpp"

using namespace qtwist;

namespace {

AlgebraSpec abelian_spec(std::size_t k) {
  AlgebraSpec s;
  s.name = "abelian";
  s.m = s.n = k;
  s.B = StructureTensor(k, k);
  s.r = RationalMatrix::identity(k);
  return s;
}

AlgebraSpec spec_with_B(const std::vector<int>& entries) {
  AlgebraSpec s = abelian_spec(2);
  std::size_t p = 0;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t mu = 0; mu < 2; ++mu) s.B(i, j, mu) = entries[p++];
  return s;
}

// [[H_j, X_mu], X_nu] - [[H_j, X_nu], X_mu], component k
Scalar jacobi_defect(const AlgebraSpec& s, std::size_t j, std::size_t mu, std::size_t nu, std::size_t k) {
  Scalar d = 0;
  for (std::size_t i = 0; i < s.m; ++i) d += s.B(i, j, mu) * s.B(k, i, nu) - s.B(i, j, nu) * s.B(k, i, mu);
  return d;
}

bool jacobi_holds(const AlgebraSpec& s) {
  for (std::size_t j = 0; j < s.m; ++j)
    for (std::size_t mu = 0; mu < s.n; ++mu)
      for (std::size_t nu = 0; nu < s.n; ++nu)
        for (std::size_t k = 0; k < s.m; ++k)
          if (jacobi_defect(s, j, mu, nu, k) != 0) return false;
  return true;
}

// Classical Yang-Baxter bracket of r computed on the Lie algebra itself,
// as a dense coefficient array over basis triples.
std::vector<Scalar> cybe_dense(const AlgebraSpec& s) {
  const std::size_t m = s.m, n = s.n, d = m + n;
  auto bracket = [&](std::size_t a, std::size_t b) {
    std::vector<Scalar> v(d);
    if (a < m && b >= m)
      for (std::size_t i = 0; i < m; ++i) v[i] = s.B(i, a, b - m);
    if (a >= m && b < m)
      for (std::size_t i = 0; i < m; ++i) v[i] = -s.B(i, b, a - m);
    return v;
  };
  std::vector<Scalar> R(d * d);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t mu = 0; mu < n; ++mu) {
      R[(m + mu) * d + i] += s.r(i, mu);
      R[i * d + m + mu] -= s.r(i, mu);
    }
  std::vector<Scalar> T(d * d * d);
  auto at = [&](std::size_t x, std::size_t y, std::size_t z) -> Scalar& { return T[(x * d + y) * d + z]; };
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) {
      if (R[a * d + b] == 0) continue;
      for (std::size_t c = 0; c < d; ++c)
        for (std::size_t e = 0; e < d; ++e) {
          const Scalar w = R[a * d + b] * R[c * d + e];
          if (w == 0) continue;
          const auto ac = bracket(a, c), bc = bracket(b, c), be = bracket(b, e);
          for (std::size_t x = 0; x < d; ++x) {
            at(x, b, e) += w * ac[x];  // [r12, r13]
            at(a, x, e) += w * bc[x];  // [r12, r23]
            at(a, c, x) += w * be[x];  // [r13, r23]
          }
        }
    }
  return T;
}

std::vector<Scalar> to_dense(const Tensor3& t, std::size_t d) {
  std::vector<Scalar> T(d * d * d);
  for (const auto& [k, c] : t.terms()) {
    std::size_t idx[3];
    for (std::size_t l = 0; l < 3; ++l) {
      int total = 0;
      for (std::size_t g = 0; g < d; ++g)
        if (k.exps[l * d + g]) {
          idx[l] = g;
          total += k.exps[l * d + g];
        }
      REQUIRE(total == 1);
    }
    T[(idx[0] * d + idx[1]) * d + idx[2]] = c;
  }
  return T;
}

AlgebraSpec change_h_basis(const AlgebraSpec& s, const RationalMatrix& T) {
  // H'_a = T(i, a) H_i
  const RationalMatrix Ti = matrix_inverse(T);
  AlgebraSpec out = s;
  out.alpha_reference.reset();
  out.xi.reset();
  out.generator_names.clear();
  for (std::size_t b = 0; b < s.m; ++b)
    for (std::size_t a = 0; a < s.m; ++a)
      for (std::size_t mu = 0; mu < s.n; ++mu) {
        Scalar v = 0;
        for (std::size_t i = 0; i < s.m; ++i)
          for (std::size_t j = 0; j < s.m; ++j) v += Ti(b, i) * s.B(i, j, mu) * T(j, a);
        out.B(b, a, mu) = v;
      }
  out.r = Ti * s.r;
  return out;
}

}  // namespace

TEST_CASE("presets validate", "[spec]") {
  for (const auto& s : {presets::poincare(), presets::jordanian(), presets::shift_ring(1), presets::shift_ring(3),
                        presets::shift_ring(5)}) {
    INFO(s.name);
    const auto rep = validate_spec(s);
    CHECK(rep.passed());
    REQUIRE(rep.checks.size() == 6);
    const std::vector<std::string> order{"jacobi", "r_invertible", "consistency", "alpha_commute", "lowered_symmetry",
                                         "cybe"};
    for (std::size_t i = 0; i < 6; ++i) CHECK(rep.checks[i].name == order[i]);
  }
}

TEST_CASE("abelian algebra validates with vanishing alpha", "[spec]") {
  const auto s = abelian_spec(3);
  CHECK(validate_spec(s).passed());
  for (const auto& a : compute_alpha_up(s)) CHECK(a.is_zero());
  auto d = derive_alpha(s, 3);
  for (std::size_t j = 0; j < 3; ++j)
    for (std::size_t mu = 0; mu < 3; ++mu) CHECK(d->algebra->commutator(j, mu).empty());
  CHECK(cybe_residual(s).is_zero());
}

TEST_CASE("Jacobi check agrees with brute force over small tensors", "[spec][property]") {
  int violating = 0;
  for (int mask = 0; mask < 256; ++mask) {
    std::vector<int> entries(8);
    for (int b = 0; b < 8; ++b) entries[b] = (mask >> b) & 1;
    const auto s = spec_with_B(entries);
    const auto rep = validation_checks(s);
    const auto* jac = rep.find("jacobi");
    const bool holds = jacobi_holds(s);
    CHECK(jac->pass == holds);
    if (!holds) {
      ++violating;
      CHECK_FALSE(jac->witness.empty());
      CHECK(jac->violations > 0);
    }
  }
  CHECK(violating > 0);

  // beta_1 = [[0,1],[0,0]] and beta_2 = [[1,0],[0,0]] do not commute
  const auto s = spec_with_B({0, 1, 1, 0, 0, 0, 0, 0});
  REQUIRE_FALSE(jacobi_holds(s));
  const auto rep = validation_checks(s);
  const auto* jac = rep.find("jacobi");
  CHECK_FALSE(jac->pass);
  CHECK(jac->witness == "[beta_X1, beta_X2] entry (H1,H2) = -1");
}

TEST_CASE("degenerate r is rejected", "[spec]") {
  auto s = presets::poincare();
  s.r(2, 2) = 0;
  const auto rep = validation_checks(s);
  CHECK_FALSE(rep.find("r_invertible")->pass);
  CHECK_THROWS_AS(validate_spec(s), spec_error);
  CHECK_THROWS_AS(derive_alpha(s), spec_error);

  auto t = presets::poincare();
  t.n = 2;
  CHECK_THROWS_AS(t.check_shape(), spec_error);
}

TEST_CASE("alpha tensors of the presets", "[spec]") {
  // the three matrices of the null-plane Poincare algebra
  const auto p = compute_alpha_up(presets::poincare());
  CHECK(p[0] == RationalMatrix{{0, 0, 1}, {0, 0, 0}, {0, 0, 0}});
  CHECK(p[1] == RationalMatrix{{0, 0, 0}, {0, 0, 1}, {0, 0, 0}});
  CHECK(p[2] == RationalMatrix::identity(3));

  // shift ring: (alpha_mu)^sigma_nu = delta^sigma_{mu+nu}
  const auto t = compute_alpha_tensors(presets::shift_ring(3));
  for (std::size_t mu = 0; mu < 3; ++mu)
    for (std::size_t sigma = 0; sigma < 3; ++sigma)
      for (std::size_t nu = 0; nu < 3; ++nu)
        CHECK(t.alpha_low[mu](sigma, nu) == Scalar(sigma == mu + nu ? 1 : 0));

  const auto j = presets::jordanian();
  CHECK(j.B(0, 0, 0) == 2);
  CHECK(j.r(0, 0) == 1);
  CHECK(compute_alpha_up(j)[0](0, 0) == 1);

  for (const auto& s : {presets::poincare(), presets::jordanian(), presets::shift_ring(4)}) {
    REQUIRE(s.alpha_reference);
    CHECK(compute_alpha_up(s) == *s.alpha_reference);
  }
}

TEST_CASE("classical limit of the commutator table is B.H", "[spec]") {
  for (const auto& s : {presets::poincare(), presets::jordanian(), presets::shift_ring(3)}) {
    auto d = derive_alpha(s, 4);
    for (std::size_t j = 0; j < s.m; ++j)
      for (std::size_t mu = 0; mu < s.n; ++mu) {
        std::vector<Scalar> slice(s.m);
        for (const auto& t : d->algebra->commutator(j, mu)) {
          if (t.power != 0) continue;
          int deg = 0;
          std::size_t which = 0;
          for (std::size_t i = 0; i < s.m; ++i)
            if (t.h[i]) {
              deg += t.h[i];
              which = i;
            }
          REQUIRE(deg == 1);
          slice[which] = t.coef;
        }
        for (std::size_t i = 0; i < s.m; ++i) CHECK(slice[i] == s.B(i, j, mu));
      }
  }
}

TEST_CASE("consistency and lowered symmetry hold as tensor identities", "[spec][property]") {
  std::mt19937 rng(41);
  std::vector<AlgebraSpec> specs{presets::poincare(), presets::jordanian(), presets::shift_ring(4)};
  for (int i = 0; i < 20; ++i) specs.push_back(oracle::random_valid_spec(rng));
  for (const auto& s : specs) {
    INFO(s.name);
    REQUIRE(validate_spec(s).passed());
    const auto t = compute_alpha_tensors(s);
    for (std::size_t i = 0; i < s.m; ++i)
      for (std::size_t j = 0; j < s.m; ++j)
        for (std::size_t k = 0; k < s.m; ++k)
          for (std::size_t nu = 0; nu < s.n; ++nu) {
            Scalar lhs = 0, rhs = 0;
            for (std::size_t mu = 0; mu < s.n; ++mu) {
              lhs += t.alpha_up[i](mu, nu) * s.B(j, k, mu);
              rhs += t.alpha_up[j](mu, nu) * s.B(i, k, mu);
            }
            CHECK(lhs == rhs);
          }
    for (std::size_t rho = 0; rho < s.n; ++rho)
      for (std::size_t mu = 0; mu < s.n; ++mu)
        for (std::size_t nu = 0; nu < s.n; ++nu) CHECK(t.alpha_low[mu](rho, nu) == t.alpha_low[nu](rho, mu));
  }
}

TEST_CASE("CYBE residual agrees with a Lie-level computation", "[spec][property]") {
  CHECK(cybe_residual(presets::poincare()).is_zero());
  CHECK(cybe_residual(presets::jordanian()).is_zero());
  CHECK(cybe_residual(abelian_spec(2)).is_zero());

  std::mt19937 rng(43);
  std::uniform_int_distribution<int> small(-2, 2);
  int nonzero = 0;
  for (int trial = 0; trial < 30; ++trial) {
    auto s = trial % 2 ? presets::poincare() : presets::shift_ring(3);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t mu = 0; mu < 3; ++mu) s.r(i, mu) = small(rng);
    const auto lib = to_dense(cybe_residual(s), 6);
    const auto ref = cybe_dense(s);
    CHECK(lib == ref);
    bool any = false;
    for (const auto& v : ref) any = any || v != 0;
    nonzero += any;
  }
  CHECK(nonzero > 0);
}

TEST_CASE("rank of H' and the center witness", "[spec]") {
  CHECK(h_prime_rank(presets::poincare()).rank == 3);
  CHECK_FALSE(h_prime_rank(presets::poincare()).center_witness);
  for (std::size_t k = 1; k <= 6; ++k) CHECK(h_prime_rank(presets::shift_ring(k)).rank == k);
  CHECK(h_prime_rank(abelian_spec(2)).rank == 0);

  // Poincare plus one extra X4 commuting with everything (and a partner H4)
  const auto p = presets::poincare();
  AlgebraSpec s = abelian_spec(4);
  s.name = "poincare-plus-center";
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t mu = 0; mu < 3; ++mu) s.B(i, j, mu) = p.B(i, j, mu);
  REQUIRE(validate_spec(s).passed());
  const auto hp = h_prime_rank(s);
  CHECK(hp.rank == 3);
  REQUIRE(hp.center_witness);
  const auto& w = *hp.center_witness;
  CHECK(w[0] == 0);
  CHECK(w[1] == 0);
  CHECK(w[2] == 0);
  CHECK(w[3] != 0);
  try {
    choose_xi(s);
    FAIL("expected no valid xi");
  } catch (const no_valid_xi_error& e) {
    REQUIRE(e.witness().size() == 4);
    CHECK(e.witness()[3] != "0");
  }
}

TEST_CASE("rank of H' is invariant under a change of H basis", "[spec][property]") {
  std::mt19937 rng(47);
  std::uniform_int_distribution<int> entry(-3, 3);
  const auto p = presets::poincare();
  const auto base = compute_alpha_tensors(p);
  for (int trial = 0; trial < 15; ++trial) {
    RationalMatrix T(3, 3);
    do {
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) T(i, j) = entry(rng);
    } while (matrix_rank(T) < 3);
    const auto q = change_h_basis(p, T);
    CHECK(validate_spec(q).passed());
    CHECK(h_prime_rank(q).rank == 3);
    const auto moved = compute_alpha_tensors(q);
    for (std::size_t mu = 0; mu < 3; ++mu) CHECK(moved.alpha_low[mu] == base.alpha_low[mu]);
  }
}

TEST_CASE("choice of xi", "[spec]") {
  const std::vector<Scalar> half{0, 0, Scalar(1, 2)};
  CHECK(choose_xi(presets::poincare()) == half);
  CHECK(choose_xi(presets::shift_ring(3)) == std::vector<Scalar>{1, 0, 0});
  CHECK(choose_xi(presets::jordanian()) == std::vector<Scalar>{1});

  // without a declared xi the search takes the first admissible scaled basis vector
  auto p = presets::poincare();
  p.xi.reset();
  const auto xi = choose_xi(p);
  const auto alpha = compute_alpha_up(p);
  CHECK(matrix_rank(xi_to_k_first_order(alpha, xi)) == 3);
  CHECK(xi == std::vector<Scalar>{0, 0, 1});
  CHECK(matrix_rank(xi_to_k_first_order(alpha, {1, 0, 0})) < 3);
  CHECK(matrix_rank(xi_to_k_first_order(alpha, {0, 1, 0})) < 3);

  auto bad = presets::poincare();
  bad.xi = std::vector<Scalar>{1, 0, 0};
  CHECK_THROWS_AS(choose_xi(bad), no_valid_xi_error);
  CHECK_THROWS_AS(choose_xi(abelian_spec(2)), no_valid_xi_error);
}

TEST_CASE("presets by name", "[spec]") {
  CHECK(presets::by_name("poincare-null-plane") == presets::poincare());
  CHECK(presets::by_name("jordanian-borel") == presets::jordanian());
  CHECK(presets::by_name("shift-ring(3)") == presets::shift_ring(3));
  CHECK(presets::by_name("shift-ring-3") == presets::shift_ring(3));
  for (const char* bad : {"", "poincare", "shift-ring", "shift-ring()", "shift-ring(x)", "shift-ring-3a"})
    CHECK_THROWS_AS(presets::by_name(bad), unsupported_preset_error);
  CHECK(presets::poincare().metadata.at("z") == "1");
}

TEST_CASE("generated two-dimensional specs are valid", "[spec][property]") {
  std::mt19937 rng(53);
  for (int trial = 0; trial < 30; ++trial) {
    const auto s = oracle::random_valid_spec(rng);
    const auto rep = validation_checks(s);
    INFO(io::render_validation_text(rep));
    CHECK(rep.passed());
    CHECK(compute_alpha_up(s) == *s.alpha_reference);
  }
}
