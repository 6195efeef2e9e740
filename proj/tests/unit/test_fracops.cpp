#include "doctest.h"

#include "fide/fracops.hpp"
#include "fide/opmat.hpp"
#include "support.hpp"

using namespace fide;
using namespace fide::testing;

namespace {
Real sqrt_pi() { return sqrt(pi()); }
}  // namespace

TEST_CASE("FracOrder") {
  CHECK(FracOrder(Q(1, 2)).m() == 1);
  CHECK(FracOrder(Q(1)).m() == 1);
  CHECK(FracOrder(Q(1)).is_integer());
  CHECK(FracOrder(Q(5, 3)).m() == 2);
  CHECK(FracOrder(Q(2)).m() == 2);
  CHECK(FracOrder(Q(5, 3)).nu() == Q(1, 3));
  CHECK_THROWS_AS(FracOrder(Q(0)), Error);
}

TEST_CASE("Caputo derivative of monomials") {
  const Real tol = ten_to_minus(precision());
  CHECK(caputo_monomial(Q(0), FracOrder(Q(1, 2))).coefficient == 0);
  CaputoTerm t = caputo_monomial(Q(1), FracOrder(Q(1, 2)));
  CHECK(abs(t.coefficient - 2 / sqrt_pi()) < tol);
  CHECK(t.exponent == Q(1, 2));
  CaputoTerm d2 = caputo_monomial(Q(2), FracOrder(Q(2)));
  CHECK(abs(d2.coefficient - 2) < tol);
  CHECK(d2.exponent == 0);
}

TEST_CASE("Gamma matrix") {
  const Real tol = ten_to_minus(precision());
  OpMatrix<Real> g = gamma_matrix<Real>(FracOrder(Q(1, 2)), 4);
  CHECK(g.is_diagonal());
  CHECK(abs(g(0, 0) - 2 / sqrt_pi()) < tol);
  CHECK(format_sci(g(0, 0), 11) == "1.1283791671e+00");
  CHECK(abs(g(1, 1) - 4 / (3 * sqrt_pi())) < tol);
  OpMatrix<Real> g2 = gamma_matrix<Real>(FracOrder(Q(2)), 3);
  CHECK(abs(g2(0, 0) - 1) < tol);
  CHECK(gamma_matrix<Rational>(FracOrder(Q(2)), 3) == OpMatrix<Rational>::identity(3, MatrixKind::Gamma));
  CHECK_THROWS_AS(gamma_matrix<Rational>(FracOrder(Q(1, 2)), 3), Error);
}

TEST_CASE("fractional power projection") {
  CHECK(fractional_power_projection<Rational>(Q(1, 2), 2).coeffs() == Qs({Q(2, 3), Q(2, 5), Q(-2, 21)}));
  CHECK(fractional_power_projection<Rational>(Q(1), 2).coeffs() == Qs({Q(1, 2), Q(1, 2), Q(0)}));
  // x^{3/2} at N = 1: a0 = 1/(5/2), a1 = 3 (-1/(5/2) + 4/(7/2))
  CHECK(fractional_power_projection<Rational>(Q(3, 2), 1).coeffs() == Qs({Q(2, 5), Q(18, 35)}));
  LegVec<Real> quad = project_function([](const Real& x) { return x * sqrt(x); }, 1);
  CHECK(max_abs_diff(quad.coeffs(), to_reals({Q(2, 5), Q(18, 35)})) < ten_to_minus(precision() / 2));
  CHECK_THROWS_AS(fractional_power_projection<Rational>(Q(-1, 2), 2), Error);
}

TEST_CASE("A matrix") {
  SUBCASE("integer order reduces to exact power expansions") {
    OpMatrix<Rational> a = build_A<Rational>(FracOrder(Q(1)), 3, 5);
    for (int j = 0; j <= 3; ++j) {
      MonoVec<Rational> xj(5);
      xj[static_cast<std::size_t>(j)] = 1;
      LegVec<Rational> expect = to_leg(xj, 3);
      for (int i = 0; i <= 3; ++i) CHECK(a(j, i) == expect[static_cast<std::size_t>(i)]);
      CHECK(a(j, 4) == 0);
    }
  }
  SUBCASE("half order row 0") {
    OpMatrix<Rational> a = build_A<Rational>(FracOrder(Q(1, 2)), 2, 4);
    CHECK(a(0, 0) == Q(2, 3));
    CHECK(a(0, 1) == Q(2, 5));
    CHECK(a(0, 2) == Q(-2, 21));
  }
  SUBCASE("rows evaluated at x = 1 approach 1") {
    // p_N(x^{m-alpha+j})(1) -> 1; compare against the measured projection error
    const int N = 12;
    OpMatrix<Rational> a = build_A<Rational>(FracOrder(Q(1, 2)), N, N + 1);
    for (int j = 0; j <= N; ++j) {
      Rational s = 0;
      for (int i = 0; i <= N; ++i) s += a(j, i);  // L_{1,i}(1) = 1
      Real err = abs(to_real(s) - 1);
      CHECK(err < Real("0.05"));
    }
  }
}

TEST_CASE("H matrix") {
  SUBCASE("integer order: first derivative of x^2") {
    HMatrix<Rational> h = build_H<Rational>(FracOrder(Q(1)), 3, 4);
    LegVec<Rational> y = to_leg(MonoVec<Rational>{Q(0), Q(0), Q(1)}, 3);
    LegVec<Rational> d = apply_H(y, h);
    CHECK(to_mono(d, 4).coeffs() == Qs({Q(0), Q(2), Q(0), Q(0)}));
  }
  SUBCASE("half order on L_{1,1} = 2x - 1") {
    // D^{1/2}(2x - 1) = (4/sqrt(pi)) x^{1/2}, projected to degree 2
    HMatrix<Real> h = build_H<Real>(FracOrder(Q(1, 2)), 2, 5);
    LegVec<Real> d = apply_H(LegVec<Real>::unit(3, 1), h);
    const Real c = 4 / sqrt_pi();
    std::vector<Real> expect{c * 2 / 3, c * 2 / 5, -c * 2 / 21};
    CHECK(max_abs_diff(d.coeffs(), expect) < ten_to_minus(precision()));
  }
  SUBCASE("constants are annihilated") {
    HMatrix<Real> h = build_H<Real>(FracOrder(Q(1, 2)), 2, 5);
    LegVec<Real> d = apply_H(LegVec<Real>::unit(3, 0), h);
    for (const Real& v : d.coeffs()) CHECK(v.is_zero());
  }
  SUBCASE("linearity is exact") {
    HMatrix<Rational> h = build_H<Rational>(FracOrder(Q(2)), 4, 6);
    LegVec<Rational> g{Q(1), Q(2), Q(-1), Q(3), Q(1, 2)};
    LegVec<Rational> k{Q(-3), Q(1, 3), Q(2), Q(0), Q(5)};
    Rational lam(3, 7), mu(-2, 5);
    std::vector<Rational> comb(5);
    for (std::size_t i = 0; i < 5; ++i) comb[i] = lam * g[i] + mu * k[i];
    LegVec<Rational> lhs = apply_H(LegVec<Rational>(comb), h);
    LegVec<Rational> hg = apply_H(g, h), hk = apply_H(k, h);
    for (std::size_t i = 0; i < lhs.size(); ++i) CHECK(lhs[i] == lam * hg[i] + mu * hk[i]);
  }
  SUBCASE("integer orders collapse to exact derivatives") {
    std::mt19937_64 rng(4242);
    for (int alpha = 1; alpha <= 2; ++alpha) {
      HMatrix<Rational> h = build_H<Rational>(FracOrder(Q(alpha)), 7, 8);
      for (int trial = 0; trial < 25; ++trial) {
        std::vector<Rational> c = random_poly(rng, 7);
        LegVec<Rational> y = to_leg(MonoVec<Rational>(c), 7);
        std::vector<Rational> got = to_mono(apply_H(y, h), 8).coeffs();
        CHECK(trimmed(got) == trimmed(derivative(c, alpha)));
      }
    }
  }
}

TEST_CASE("Caputo oracle") {
  const Real tol = ten_to_minus(precision() / 3);
  SUBCASE("D^{1/2} x at 1/4 is 1/sqrt(pi)") {
    Real v = caputo_oracle([](const Real& x) { return x; }, FracOrder(Q(1, 2)), Real(1) / 4,
                           {[](const Real&) { return Real(1); }, {}});
    CHECK(abs(v - 1 / sqrt_pi()) < tol);
    Real fd = caputo_oracle([](const Real& x) { return x; }, FracOrder(Q(1, 2)), Real(1) / 4);
    CHECK(abs(fd - 1 / sqrt_pi()) < tol);
  }
  SUBCASE("D^{1/2}(x^2 - x) matches the closed form") {
    auto f = [](const Real& x) { return x * x - x; };
    for (int k = 1; k <= 9; ++k) {
      Real x = Real(k) / 10;
      Real expect = (Real(8) / 3 * pow(x, Real(1.5)) - 2 * sqrt(x)) / sqrt_pi();
      Real got = caputo_oracle(f, FracOrder(Q(1, 2)), x, {[](const Real& t) { return 2 * t - 1; }, {}});
      CHECK(abs(got - expect) < tol);
      CHECK(abs(caputo_oracle(f, FracOrder(Q(1, 2)), x) - expect) < tol);
    }
  }
  SUBCASE("constants vanish") {
    for (Rational a : {Q(1, 4), Q(3, 4), Q(5, 3)}) {
      Real v = caputo_oracle([](const Real&) { return Real(7); }, FracOrder(a), Real(1) / 2);
      CHECK(abs(v) < tol);
    }
  }
}

TEST_CASE("finite-difference stencil") {
  Real x = Real(3) / 10;
  Real d1 = finite_difference_derivative([](const Real& t) { return exp(t); }, 1, x);
  Real d2 = finite_difference_derivative([](const Real& t) { return exp(t); }, 2, x);
  CHECK(abs(d1 - exp(x)) < ten_to_minus(40));
  CHECK(abs(d2 - exp(x)) < ten_to_minus(35));
}
