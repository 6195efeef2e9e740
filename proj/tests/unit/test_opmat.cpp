#include "doctest.h"

#include <random>

#include "fide/opmat.hpp"
#include "support.hpp"

using namespace fide;
using namespace fide::testing;

TEST_CASE("differentiation matrix M") {
  OpMatrix<Rational> M = build_M<Rational>(4);
  CHECK(differentiate(MonoVec<Rational>{Q(0), Q(0), Q(1), Q(0)}, M).coeffs() ==
        Qs({Q(0), Q(2), Q(0), Q(0)}));
  CHECK(differentiate(MonoVec<Rational>{Q(1), Q(0), Q(0), Q(0)}, M).coeffs() ==
        Qs({Q(0), Q(0), Q(0), Q(0)}));
  // second derivative of x^3 is 6x
  CHECK(differentiate(MonoVec<Rational>{Q(0), Q(0), Q(0), Q(1)}, M, 2).coeffs() ==
        Qs({Q(0), Q(6), Q(0), Q(0)}));
}

TEST_CASE("multiplication matrix N") {
  Applied<Rational> a = multiply_by_x(MonoVec<Rational>{Q(1), Q(0), Q(0), Q(0)}, build_N<Rational>(4));
  CHECK(a.value.coeffs() == Qs({Q(0), Q(1), Q(0), Q(0)}));
  CHECK_FALSE(a.truncation_loss);

  Applied<Rational> lost = multiply_by_x(MonoVec<Rational>{Q(0), Q(0), Q(0), Q(1)}, build_N<Rational>(4));
  CHECK(lost.truncation_loss);

  // x^2 (1 + 2x) = x^2 + 2x^3
  Applied<Rational> s2 =
      multiply_by_x(MonoVec<Rational>{Q(1), Q(2), Q(0), Q(0), Q(0)}, build_N<Rational>(5), 2);
  CHECK(s2.value.coeffs() == Qs({Q(0), Q(0), Q(1), Q(2), Q(0)}));
  CHECK_FALSE(s2.truncation_loss);
}

TEST_CASE("integration matrix P") {
  OpMatrix<Rational> P = build_P<Rational>(4);
  CHECK(antiderivative(MonoVec<Rational>{Q(1), Q(0), Q(0), Q(0)}, P).value.coeffs() ==
        Qs({Q(0), Q(1), Q(0), Q(0)}));
  CHECK(antiderivative(MonoVec<Rational>{Q(0), Q(2), Q(0), Q(0)}, P).value.coeffs() ==
        Qs({Q(0), Q(0), Q(1), Q(0)}));
  CHECK(definite_integral(MonoVec<Rational>{Q(0), Q(0), Q(3), Q(0)}, P, Q(1), Q(1)) == 0);
  CHECK(antiderivative(MonoVec<Rational>{Q(0), Q(0), Q(0), Q(1)}, P).truncation_loss);
}

TEST_CASE("moment vector") {
  CHECK(moment_vector<Rational>(3).coeffs() == Qs({Q(1), Q(1, 2), Q(1, 3)}));
  // t (t^2 - t)^4, expanded by the convolution oracle
  std::vector<Rational> p = convolve({Q(0), Q(1)}, power({Q(0), Q(-1), Q(1)}, 4));
  MonoVec<Rational> poly(p);
  CHECK(poly.size() == 10);
  CHECK(integrate_unit(poly, moment_vector<Rational>(10)) == Q(1, 1260));
  CHECK(integrate_unit(MonoVec<Rational>(5), moment_vector<Rational>(5)) == 0);
}

TEST_CASE("operational identities on random polynomials") {
  std::mt19937_64 rng(314159);
  const int W = 12;
  const OpMatrix<Rational> M = build_M<Rational>(W);
  const OpMatrix<Rational> N = build_N<Rational>(W);
  const OpMatrix<Rational> P = build_P<Rational>(W);
  for (int trial = 0; trial < 100; ++trial) {
    std::uniform_int_distribution<int> deg(0, 8);
    std::vector<Rational> c = random_poly(rng, deg(rng));
    MonoVec<Rational> y = MonoVec<Rational>(c).resized(W);
    for (int r = 1; r <= 3; ++r) {
      CHECK(trimmed(differentiate(y, M, r).coeffs()) == trimmed(derivative(c, r)));
    }
    for (int s = 0; s + static_cast<int>(c.size()) <= W; ++s) {
      Applied<Rational> xs = multiply_by_x(y, N, s);
      std::vector<Rational> expect(static_cast<std::size_t>(s), Rational(0));
      expect.insert(expect.end(), c.begin(), c.end());
      CHECK_FALSE(xs.truncation_loss);
      CHECK(trimmed(xs.value.coeffs()) == trimmed(expect));
    }
    Rational a = abs(random_rational(rng)) / 9;
    // exact definite integral from the antiderivative oracle
    std::vector<Rational> anti(c.size() + 1, Rational(0));
    for (std::size_t i = 0; i < c.size(); ++i) anti[i + 1] = c[i] / Rational(static_cast<long>(i + 1));
    for (int k = 0; k < 20; ++k) {
      Rational x(k, 19);
      CHECK(definite_integral(y, P, a, x) == evaluate(anti, x) - evaluate(anti, a));
    }
    // integrate then differentiate
    CHECK(differentiate(antiderivative(y, P).value, M) == y);
  }
}
