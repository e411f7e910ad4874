#pragma once

#include <cstddef>
#include <vector>

#include "qtwist/error.hpp"
#include "qtwist/rational.hpp"
#include "qtwist/tensor.hpp"

namespace qtwist {

/// Square matrix of pure-H elements. Entries commute, so the usual matrix
/// algebra applies and power series of a matrix are well defined.
class SeriesMatrix {
public:
  SeriesMatrix() = default;
  SeriesMatrix(const AlgebraPtr& alg, int order, std::size_t dim)
      : dim_(dim), entries_(dim * dim, Element(alg, order)) {}

  static SeriesMatrix identity(const AlgebraPtr& alg, int order, std::size_t dim) {
    SeriesMatrix s(alg, order, dim);
    for (std::size_t i = 0; i < dim; ++i) s(i, i) = Element::unit(alg, order);
    return s;
  }

  std::size_t dim() const noexcept { return dim_; }
  Element& operator()(std::size_t row, std::size_t col) { return entries_.at(row * dim_ + col); }
  const Element& operator()(std::size_t row, std::size_t col) const { return entries_.at(row * dim_ + col); }

  int valuation() const {
    int v = entries_.empty() ? 0 : entries_.front().order() + 1;
    for (const auto& e : entries_) v = std::min(v, e.valuation());
    return v;
  }

  bool is_pure_h() const {
    for (const auto& e : entries_)
      if (!qtwist::is_pure_h(e)) return false;
    return true;
  }

  friend SeriesMatrix operator*(const SeriesMatrix& a, const SeriesMatrix& b) {
    if (a.dim_ != b.dim_) throw shape_error("series matrix dimension mismatch");
    const auto& proto = a.entries_.front();
    SeriesMatrix c(proto.algebra(), proto.order(), a.dim_);
    for (std::size_t i = 0; i < a.dim_; ++i)
      for (std::size_t k = 0; k < a.dim_; ++k) {
        if (a(i, k).is_zero()) continue;
        for (std::size_t j = 0; j < a.dim_; ++j)
          if (!b(k, j).is_zero()) c(i, j) += a(i, k) * b(k, j);
      }
    return c;
  }

  SeriesMatrix& operator+=(const SeriesMatrix& o) {
    if (dim_ != o.dim_) throw shape_error("series matrix dimension mismatch");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += o.entries_[i];
    return *this;
  }
  SeriesMatrix& operator-=(const SeriesMatrix& o) {
    if (dim_ != o.dim_) throw shape_error("series matrix dimension mismatch");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= o.entries_[i];
    return *this;
  }
  SeriesMatrix& operator*=(const Scalar& s) {
    for (auto& e : entries_) e *= s;
    return *this;
  }
  friend SeriesMatrix operator+(SeriesMatrix a, const SeriesMatrix& b) { return a += b; }
  friend SeriesMatrix operator-(SeriesMatrix a, const SeriesMatrix& b) { return a -= b; }
  friend SeriesMatrix operator*(SeriesMatrix a, const Scalar& s) { return a *= s; }

  friend bool operator==(const SeriesMatrix& a, const SeriesMatrix& b) {
    return a.dim_ == b.dim_ && a.entries_ == b.entries_;
  }

  SeriesMatrix rehomed(const AlgebraPtr& alg, int order) const {
    SeriesMatrix s = *this;
    for (auto& e : s.entries_) e = e.rehomed(alg, order);
    return s;
  }

private:
  std::size_t dim_ = 0;
  std::vector<Element> entries_;
};

/// sum_k f[k] M^k, truncated at the entries' order. M must have positive
/// deformation valuation and f must supply at least order + 1 coefficients.
inline SeriesMatrix series_apply(const std::vector<Scalar>& f, const SeriesMatrix& M) {
  if (M.dim() == 0) return M;
  const Element& proto = M(0, 0);
  const int order = proto.order();
  if (M.valuation() < 1) throw non_truncatable_error("series_apply: matrix has a deformation-power-0 entry");
  if (f.size() < static_cast<std::size_t>(order) + 1)
    throw shape_error("series_apply: need at least order + 1 Taylor coefficients");
  SeriesMatrix result = SeriesMatrix::identity(proto.algebra(), order, M.dim()) * f[0];
  SeriesMatrix power = SeriesMatrix::identity(proto.algebra(), order, M.dim());
  for (int k = 1; k <= order; ++k) {
    power = power * M;
    if (f[k] != 0) result += power * f[k];
  }
  return result;
}

/// Taylor coefficients of the functions used by the deformed relations.
namespace taylor {

/// e^{s t}
inline std::vector<Scalar> exp(int count, const Scalar& s = Scalar(1)) {
  std::vector<Scalar> c(count);
  Scalar p = 1;
  for (int k = 0; k < count; ++k) {
    c[k] = p * factorial_inverse(k);
    p *= s;
  }
  return c;
}

/// (e^t - 1) / t = sum t^k / (k+1)!
inline std::vector<Scalar> expm1_over_t(int count) {
  std::vector<Scalar> c(count);
  for (int k = 0; k < count; ++k) c[k] = factorial_inverse(k + 1);
  return c;
}

/// 1 - e^{-t}
inline std::vector<Scalar> one_minus_exp_neg(int count) {
  auto c = exp(count, Scalar(-1));
  for (auto& v : c) v = -v;
  if (count > 0) c[0] += 1;
  return c;
}

inline std::vector<Scalar> sinh(int count) {
  std::vector<Scalar> c(count);
  for (int k = 1; k < count; k += 2) c[k] = factorial_inverse(k);
  return c;
}

inline std::vector<Scalar> cosh(int count) {
  std::vector<Scalar> c(count);
  for (int k = 0; k < count; k += 2) c[k] = factorial_inverse(k);
  return c;
}

}  // namespace taylor

/// f(x) for a single element x with positive valuation (scalar series).
inline Element series_apply(const std::vector<Scalar>& f, const Element& x) {
  if (x.valuation() < 1) throw non_truncatable_error("series_apply: argument has a deformation-power-0 term");
  if (f.size() < static_cast<std::size_t>(x.order()) + 1)
    throw shape_error("series_apply: need at least order + 1 Taylor coefficients");
  Element result = Element::scalar(x.algebra(), x.order(), f[0]);
  Element power = Element::unit(x.algebra(), x.order());
  for (int k = 1; k <= x.order(); ++k) {
    power = power * x;
    if (f[k] != 0) result += power * f[k];
  }
  return result;
}

}  // namespace qtwist
