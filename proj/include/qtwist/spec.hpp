#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qtwist/algebra.hpp"
#include "qtwist/error.hpp"
#include "qtwist/linalg.hpp"
#include "qtwist/rational.hpp"

namespace qtwist {

/// Structure constants B^i_{j mu} of [H_j, X_mu] = B^i_{j mu} H_i.
class StructureTensor {
public:
  StructureTensor() = default;
  StructureTensor(std::size_t m, std::size_t n) : m_(m), n_(n), data_(m * m * n) {}

  std::size_t m() const noexcept { return m_; }
  std::size_t n() const noexcept { return n_; }

  Scalar& operator()(std::size_t i, std::size_t j, std::size_t mu) { return data_.at((i * m_ + j) * n_ + mu); }
  const Scalar& operator()(std::size_t i, std::size_t j, std::size_t mu) const {
    return data_.at((i * m_ + j) * n_ + mu);
  }

  friend bool operator==(const StructureTensor&, const StructureTensor&) = default;

private:
  std::size_t m_ = 0;
  std::size_t n_ = 0;
  std::vector<Scalar> data_;
};

/// Declaration of a quasi-Abelian Lie algebra L = H |x V together with the
/// r-matrix that drives its quantization.
struct AlgebraSpec {
  std::string name;
  std::size_t m = 0;
  std::size_t n = 0;
  std::vector<std::string> generator_names;  // H names, then X names
  StructureTensor B;
  RationalMatrix r;  // r(i, mu) = r^{i mu}
  std::optional<std::vector<Scalar>> xi;
  int order = 4;
  /// Optional reference matrices (alpha^i)^mu_nu that B and r must reproduce.
  std::optional<std::vector<RationalMatrix>> alpha_reference;
  std::map<std::string, std::string> metadata;

  friend bool operator==(const AlgebraSpec&, const AlgebraSpec&) = default;

  std::vector<std::string> names() const {
    return generator_names.empty() ? Algebra::default_names(m, n) : generator_names;
  }

  /// Structural checks only (shapes); algebraic validation lives elsewhere.
  void check_shape() const {
    if (m == 0 || n == 0) throw spec_error("m and n must be positive");
    if (m != n) throw spec_error("m must equal n (r must be square and invertible)");
    if (!generator_names.empty() && generator_names.size() != m + n)
      throw spec_error("generator_names must list m + n names");
    if (B.m() != m || B.n() != n) throw spec_error("B has the wrong shape");
    if (r.rows() != m || r.cols() != n) throw spec_error("r has the wrong shape");
    if (xi && xi->size() != n) throw spec_error("xi must have n entries");
    if (order < 0) throw spec_error("order must be non-negative");
    if (alpha_reference) {
      if (alpha_reference->size() != m) throw spec_error("alpha reference must hold m matrices");
      for (const auto& a : *alpha_reference)
        if (a.rows() != n || a.cols() != n) throw spec_error("alpha reference matrices must be n x n");
    }
  }
};

/// B^i_{j nu} = 2 r_{j mu} (alpha^i)^mu_nu: the unique B whose classical
/// bracket reproduces the given alpha under (alpha^i)^mu_nu = 1/2 r^{j mu} B^i_{j nu}.
inline StructureTensor structure_from_alpha(const std::vector<RationalMatrix>& alpha_up, const RationalMatrix& r) {
  const std::size_t m = r.rows();
  const std::size_t n = r.cols();
  const RationalMatrix r_low = matrix_inverse(r).transpose();  // r_low(j, mu) = r_{j mu}
  StructureTensor B(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t nu = 0; nu < n; ++nu) {
        Scalar s = 0;
        for (std::size_t mu = 0; mu < n; ++mu) s += r_low(j, mu) * alpha_up[i](mu, nu);
        B(i, j, nu) = 2 * s;
      }
  return B;
}

namespace presets {

inline constexpr const char* poincare_null_plane = "poincare-null-plane";
inline constexpr const char* jordanian_borel = "jordanian-borel";

/// The null-plane Poincare algebra in the lifted basis H^mu (r = identity).
inline AlgebraSpec poincare() {
  AlgebraSpec s;
  s.name = poincare_null_plane;
  s.m = s.n = 3;
  s.generator_names = {"H1", "H2", "H3", "X1", "X2", "X3"};
  s.r = RationalMatrix::identity(3);
  s.alpha_reference = std::vector<RationalMatrix>{
      RationalMatrix{{0, 0, 1}, {0, 0, 0}, {0, 0, 0}},
      RationalMatrix{{0, 0, 0}, {0, 0, 1}, {0, 0, 0}},
      RationalMatrix{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}},
  };
  s.B = structure_from_alpha(*s.alpha_reference, s.r);
  s.xi = std::vector<Scalar>{0, 0, Scalar(1, 2)};
  s.order = 4;
  s.metadata = {
      {"notation", "H^i = -z E_i, H^3 = -z P_+, Y_i = 2 P_i, Y_3 = -2 K_3 (i = 1, 2)"},
      {"z", "1"},
      {"basis", "lifted: H^mu = r^{i mu} H_i with r = identity"},
  };
  return s;
}

/// Jordanian deformation of the two-dimensional Borel algebra:
/// [H, X] = 2H classically, r = 1, alpha = 1.
inline AlgebraSpec jordanian() {
  AlgebraSpec s;
  s.name = jordanian_borel;
  s.m = s.n = 1;
  s.generator_names = {"H", "X"};
  s.r = RationalMatrix{{1}};
  s.B = StructureTensor(1, 1);
  s.B(0, 0, 0) = 2;
  s.alpha_reference = std::vector<RationalMatrix>{RationalMatrix{{1}}};
  s.order = 6;
  s.metadata = {
      {"convention", "[H, X] = 2H at hbar = 0; Delta(X) = e^{2 hbar H} (x) X + X (x) 1"},
  };
  return s;
}

/// The shift ring (alpha_mu)^sigma_nu = delta^sigma_{mu+nu} on indices 0..k-1.
inline AlgebraSpec shift_ring(std::size_t k) {
  if (k == 0) throw spec_error("shift-ring size must be positive");
  AlgebraSpec s;
  s.name = "shift-ring(" + std::to_string(k) + ")";
  s.m = s.n = k;
  for (std::size_t i = 0; i < k; ++i) s.generator_names.push_back("H" + std::to_string(i));
  for (std::size_t i = 0; i < k; ++i) s.generator_names.push_back("X" + std::to_string(i));
  s.r = RationalMatrix::identity(k);
  std::vector<RationalMatrix> alpha(k, RationalMatrix(k, k));
  for (std::size_t mu = 0; mu < k; ++mu)
    for (std::size_t nu = 0; mu + nu < k; ++nu) alpha[mu](mu + nu, nu) = 1;
  s.alpha_reference = alpha;
  s.B = structure_from_alpha(alpha, s.r);
  s.xi = std::vector<Scalar>(k, 0);
  (*s.xi)[0] = 1;
  s.order = 4;
  return s;
}

/// Accepts "poincare-null-plane", "jordanian-borel", "shift-ring(k)" and
/// "shift-ring-k".
inline AlgebraSpec by_name(const std::string& name) {
  if (name == poincare_null_plane) return poincare();
  if (name == jordanian_borel) return jordanian();
  const std::string prefix = "shift-ring";
  if (name.rfind(prefix, 0) == 0 && name.size() > prefix.size()) {
    std::string rest = name.substr(prefix.size());
    if (rest.front() == '(' && rest.back() == ')') rest = rest.substr(1, rest.size() - 2);
    else if (rest.front() == '-') rest = rest.substr(1);
    else rest.clear();
    if (!rest.empty() && rest.find_first_not_of("0123456789") == std::string::npos && rest.size() < 4)
      return shift_ring(std::stoul(rest));
  }
  throw unsupported_preset_error("unknown preset '" + name + "'");
}

}  // namespace presets

}  // namespace qtwist
