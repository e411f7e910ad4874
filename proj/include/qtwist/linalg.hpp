#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qtwist/error.hpp"
#include "qtwist/rational.hpp"

namespace qtwist {

/// Dense row-major matrix over the rationals.
class RationalMatrix {
public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}
  RationalMatrix(std::initializer_list<std::initializer_list<long>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw shape_error("ragged matrix initializer");
      for (long v : row) data_.emplace_back(v);
    }
  }

  static RationalMatrix identity(std::size_t n) {
    RationalMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Scalar& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Scalar& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  bool is_zero() const {
    for (const auto& v : data_)
      if (v != 0) return false;
    return true;
  }

  RationalMatrix transpose() const {
    RationalMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend bool operator==(const RationalMatrix& a, const RationalMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
    if (a.cols_ != b.rows_) throw shape_error("matrix product dimension mismatch");
    RationalMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (a(i, k) == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += a(i, k) * b(k, j);
      }
    return c;
  }

  friend RationalMatrix operator-(const RationalMatrix& a, const RationalMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw shape_error("matrix difference dimension mismatch");
    RationalMatrix c = a;
    for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] -= b.data_[i];
    return c;
  }

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> data_;
};

namespace detail {

/// Row-scales a rational matrix to an integer one: returns the integer
/// matrix and the per-row multipliers (lcm of row denominators).
inline std::pair<std::vector<std::vector<mpz_class>>, std::vector<mpz_class>>
integer_rows(const RationalMatrix& m) {
  std::vector<std::vector<mpz_class>> out(m.rows(), std::vector<mpz_class>(m.cols()));
  std::vector<mpz_class> scale(m.rows(), 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::vector<Scalar> row(m.cols());
    mpz_class l = 1;
    for (std::size_t j = 0; j < m.cols(); ++j) {
      row[j] = m(i, j);
      row[j].canonicalize();
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), row[j].get_den_mpz_t());
    }
    scale[i] = l;
    for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = row[j].get_num() * (l / row[j].get_den());
  }
  return {std::move(out), std::move(scale)};
}

inline mpz_class exact_div(const mpz_class& a, const mpz_class& b) {
  mpz_class q;
  mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

}  // namespace detail

/// Exact rank via Bareiss fraction-free elimination.
inline std::size_t matrix_rank(const RationalMatrix& m) {
  auto [a, scale] = detail::integer_rows(m);
  (void)scale;
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  mpz_class prev = 1;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t piv = rank;
    while (piv < rows && a[piv][col] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[rank]);
    for (std::size_t i = rank + 1; i < rows; ++i) {
      for (std::size_t j = col + 1; j < cols; ++j)
        a[i][j] = detail::exact_div(a[rank][col] * a[i][j] - a[i][col] * a[rank][j], prev);
      a[i][col] = 0;
    }
    prev = a[rank][col];
    ++rank;
  }
  return rank;
}

/// Exact inverse via fraction-free Gauss-Jordan on [A | I].
/// Throws singular_matrix_error when A is not invertible.
inline RationalMatrix matrix_inverse(const RationalMatrix& m) {
  if (m.rows() != m.cols()) throw shape_error("matrix_inverse: matrix is not square");
  const std::size_t n = m.rows();
  auto [a, scale] = detail::integer_rows(m);
  for (std::size_t i = 0; i < n; ++i) {
    a[i].resize(2 * n);
    a[i][n + i] = 1;
  }
  mpz_class prev = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && a[piv][k] == 0) ++piv;
    if (piv == n) throw singular_matrix_error("matrix is singular");
    std::swap(a[piv], a[k]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k) continue;
      for (std::size_t j = 0; j < 2 * n; ++j) {
        if (j == k) continue;
        a[i][j] = detail::exact_div(a[k][k] * a[i][j] - a[i][k] * a[k][j], prev);
      }
      a[i][k] = 0;
    }
    prev = a[k][k];
  }
  // Every diagonal entry now equals det of the scaled matrix; the right block
  // is det * inverse(scaled). inverse(A) = inverse(scaled) * diag(scale).
  RationalMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Scalar v(a[i][n + j] * scale[j], a[i][i]);
      v.canonicalize();
      inv(i, j) = v;
    }
  return inv;
}

/// A nonzero kernel vector (A v = 0), or nothing when A has full column rank.
inline std::optional<std::vector<Scalar>> kernel_vector(const RationalMatrix& m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  RationalMatrix a = m;
  std::vector<std::size_t> pivot_cols;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && a(piv, c) == 0) ++piv;
    if (piv == rows) continue;
    for (std::size_t j = 0; j < cols; ++j) std::swap(a(piv, j), a(r, j));
    const Scalar p = a(r, c);
    for (std::size_t j = 0; j < cols; ++j) a(r, j) /= p;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a(i, c) == 0) continue;
      const Scalar f = a(i, c);
      for (std::size_t j = 0; j < cols; ++j) a(i, j) -= f * a(r, j);
    }
    pivot_cols.push_back(c);
    ++r;
  }
  if (pivot_cols.size() == cols) return std::nullopt;
  std::size_t free_col = 0;
  for (std::size_t k = 0; k < pivot_cols.size() && pivot_cols[k] == free_col; ++k) ++free_col;
  std::vector<Scalar> v(cols);
  v[free_col] = 1;
  for (std::size_t k = 0; k < pivot_cols.size(); ++k) v[pivot_cols[k]] = -a(k, free_col);
  return v;
}

}  // namespace qtwist
