#include <random>

#include <catch_amalgamated.hpp>

#include "qtwist/qtwist.hpp"

using namespace qtwist;

TEST_CASE("rationals parse exactly and reject anything inexact", "[rational]") {
  CHECK(parse_rational("1/3") == Scalar(1, 3));
  CHECK(parse_rational("-6/4") == Scalar(-3, 2));
  CHECK(parse_rational("+7") == Scalar(7));
  CHECK(parse_rational("−3/2") == Scalar(-3, 2));
  CHECK(parse_rational("0/5") == Scalar(0));
  for (const char* bad : {"", "1/0", "0.5", "1e3", "1/", "/2", " 1", "1 /2", "abc", "--1", "1/-2", "0x10"})
    CHECK_FALSE(parse_rational(bad).has_value());
  CHECK(to_string(Scalar(-3, 2)) == "-3/2");
  CHECK(factorial_inverse(5) == Scalar(1, 120));
}

TEST_CASE("matrix inverse on small cases", "[linalg]") {
  CHECK(matrix_inverse(RationalMatrix::identity(3)) == RationalMatrix::identity(3));
  RationalMatrix two(1, 1);
  two(0, 0) = 2;
  CHECK(matrix_inverse(two)(0, 0) == Scalar(1, 2));
  const RationalMatrix a{{0, 1}, {1, 1}};
  CHECK(matrix_inverse(a) == RationalMatrix{{-1, 1}, {1, 0}});
  CHECK_THROWS_AS(matrix_inverse(RationalMatrix{{1, 2}, {2, 4}}), singular_matrix_error);
  CHECK_THROWS_AS(matrix_inverse(RationalMatrix(2, 3)), shape_error);
}

TEST_CASE("random invertible matrices satisfy M * inverse(M) = I", "[linalg][property]") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> entry(-5, 5), den(1, 4), dim(1, 5);
  int tested = 0;
  while (tested < 60) {
    const std::size_t n = dim(rng);
    RationalMatrix M(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) M(i, j) = make_scalar(entry(rng), den(rng));
    if (matrix_rank(M) < n) {
      CHECK_THROWS_AS(matrix_inverse(M), singular_matrix_error);
      continue;
    }
    const auto inv = matrix_inverse(M);
    CHECK(M * inv == RationalMatrix::identity(n));
    CHECK(inv * M == RationalMatrix::identity(n));
    ++tested;
  }
}

TEST_CASE("rank over the rationals", "[linalg]") {
  CHECK(matrix_rank(RationalMatrix(3, 4)) == 0);
  CHECK(matrix_rank(RationalMatrix::identity(3)) == 3);
  CHECK(matrix_rank(RationalMatrix{{1, 2, 3}, {2, 4, 6}, {1, 0, 1}}) == 2);
  RationalMatrix frac(2, 2);
  frac(0, 0) = Scalar(1, 3);
  frac(0, 1) = Scalar(1, 2);
  frac(1, 0) = Scalar(2, 9);
  frac(1, 1) = Scalar(1, 3);
  CHECK(matrix_rank(frac) == 1);
  // third alpha matrix of the null-plane Poincare preset is the identity
  const auto alpha = compute_alpha_up(presets::poincare());
  CHECK(alpha[2] == RationalMatrix::identity(3));
  CHECK(matrix_rank(alpha[2]) == 3);
}

TEST_CASE("rank agrees with the dimension of the kernel", "[linalg][property]") {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> entry(-2, 2), dim(1, 4);
  for (int trial = 0; trial < 80; ++trial) {
    const std::size_t r = dim(rng), c = dim(rng);
    RationalMatrix M(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) M(i, j) = entry(rng);
    const auto k = kernel_vector(M);
    CHECK(k.has_value() == (matrix_rank(M) < c));
    if (k) {
      bool nonzero = false;
      for (std::size_t j = 0; j < c; ++j) nonzero = nonzero || (*k)[j] != 0;
      CHECK(nonzero);
      for (std::size_t i = 0; i < r; ++i) {
        Scalar s = 0;
        for (std::size_t j = 0; j < c; ++j) s += M(i, j) * (*k)[j];
        CHECK(s == 0);
      }
    }
  }
}
