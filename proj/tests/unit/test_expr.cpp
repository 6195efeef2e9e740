#include "doctest.h"

#include "fide/expr.hpp"
#include "support.hpp"

using namespace fide;
using namespace fide::testing;

namespace {
Real tol() { return ten_to_minus(precision()); }
Real at(const char* text, double x, double t = 0) { return Expression::parse(text).evaluate(Real(x), Real(t)); }
}  // namespace

TEST_CASE("parse and evaluate") {
  CHECK(abs(at("1 + 2*3", 0) - 7) < tol());
  CHECK(abs(at("2^3^2", 0) - 512) < tol());
  CHECK(abs(at("-2^2", 0) + 4) < tol());
  CHECK(abs(at("(x + t)^2", 0.5, 0.25) - Real(0.5625)) < tol());
  CHECK(abs(at("x\xE2\x88\x92" "1", 3) - 2) < tol());
  CHECK(abs(at("exp(1)", 0) - exp(Real(1))) < tol());
  CHECK(abs(at("gamma(1/2)", 0) - sqrt(pi())) < tol());
  CHECK(abs(at("erf(x)", 0.5) - erf(Real(0.5))) < tol());
  CHECK(abs(at("log(x)*sqrt(x)", 4) - log(Real(4)) * 2) < tol());
  CHECK(abs(at("sin(pi/6) + cos(0)", 0) - Real(1.5)) < tol());
  CHECK(abs(at("x^(3/2)", 4) - 8) < tol());
  CHECK(abs(at("0.25e1", 0) - Real(2.5)) < tol());
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_AS(Expression::parse("1 +"), ParseError);
  CHECK_THROWS_AS(Expression::parse("foo(x)"), ParseError);
  CHECK_THROWS_AS(Expression::parse("gamma(x)"), ParseError);
  CHECK_THROWS_AS(Expression::parse("(x"), ParseError);
  CHECK_THROWS_AS(Expression::parse("y"), ParseError);
  try {
    Expression::parse("x + $", 3, 5);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 9);
  }
}

TEST_CASE("dependence and constants") {
  CHECK(Expression::parse("x*t").depends_on_x());
  CHECK(Expression::parse("x*t").depends_on_t());
  CHECK_FALSE(Expression::parse("exp(x)").depends_on_t());
  CHECK(Expression::parse("gamma(1/3)").is_constant());
  CHECK(*Expression::parse("(1/2 + 1/3)^2").rational_value() == Q(25, 36));
  CHECK(*Expression::parse("-(2/3)^-2").rational_value() == Q(-9, 4));
  CHECK_FALSE(Expression::parse("sqrt(2)").rational_value());
  CHECK_FALSE(Expression::parse("x").rational_value());
}

TEST_CASE("bivariate polynomial form") {
  auto k = Expression::parse("(x + t)^2").bivariate_polynomial();
  REQUIRE(k);
  CHECK((*k)(0, 2) == 1);
  CHECK((*k)(1, 1) == 2);
  CHECK((*k)(2, 0) == 1);
  CHECK((*k)(0, 0) == 0);
  auto xt = Expression::parse("x*t/3").bivariate_polynomial();
  REQUIRE(xt);
  CHECK((*xt)(1, 1) == Q(1, 3));
  CHECK_FALSE(Expression::parse("exp(x*t)").bivariate_polynomial());
  CHECK_FALSE(Expression::parse("x^(1/2)").bivariate_polynomial());
  CHECK_FALSE(Expression::parse("1/(1+x)").bivariate_polynomial());
}

TEST_CASE("power sums") {
  auto terms = Expression::parse("(8/3*x^(3/2) - 2*x^(1/2))/gamma(1/2) - x/1260").power_sum();
  REQUIRE(terms);
  REQUIRE(terms->size() == 3);
  Real c12 = 0, c32 = 0, c1 = 0;
  for (const PowerTerm& p : *terms) {
    if (p.exponent == Q(1, 2)) c12 = p.coefficient_value();
    if (p.exponent == Q(3, 2)) c32 = p.coefficient_value();
    if (p.exponent == Q(1)) {
      c1 = p.coefficient_value();
      CHECK(*p.exact_coefficient() == Q(-1, 1260));
    }
  }
  CHECK(abs(c12 + 2 / sqrt(pi())) < tol());
  CHECK(abs(c32 - Real(8) / 3 / sqrt(pi())) < tol());
  CHECK(abs(c1 + Real(1) / 1260) < tol());
  CHECK_FALSE(Expression::parse("exp(x)").power_sum());
  auto merged = Expression::parse("x + 2*x - 3*x").power_sum();
  REQUIRE(merged);
  CHECK(merged->empty());
}

TEST_CASE("taylor coefficients match closed forms") {
  const Real eps = ten_to_minus(precision() - 5);
  OpMatrix<Real> e = Expression::parse("exp(x*t)").taylor(12);
  for (int i = 0; i <= 12; ++i)
    for (int j = 0; j + i <= 12; ++j) {
      Real want = i == j ? 1 / to_real(factorial(i)) : Real(0);
      CHECK(abs(e(i, j) - want) < eps);
    }
  // 1/(1 - x t/2) = sum (xt/2)^n
  OpMatrix<Real> g = Expression::parse("1/(1 - x*t/2)").taylor(10);
  CHECK(abs(g(4, 4) - Real(1) / 16) < eps);
  CHECK(abs(g(3, 4)) < eps);
  // log(1 + x) = x - x^2/2 + x^3/3
  OpMatrix<Real> l = Expression::parse("log(1 + x)").taylor(6);
  CHECK(abs(l(3, 0) - Real(1) / 3) < eps);
  CHECK(abs(l(4, 0) + Real(1) / 4) < eps);
  // sqrt(1 + x) = 1 + x/2 - x^2/8
  OpMatrix<Real> s = Expression::parse("sqrt(1 + x*t)").taylor(6);
  CHECK(abs(s(2, 2) + Real(1) / 8) < eps);
  // sin(x + t): coefficient of x t^2 is -1/2
  OpMatrix<Real> sn = Expression::parse("sin(x + t)").taylor(6);
  CHECK(abs(sn(1, 2) + Real(1) / 2) < eps);
  // erf(x) = 2/sqrt(pi) (x - x^3/3 + ...)
  OpMatrix<Real> ef = Expression::parse("erf(x)").taylor(5);
  CHECK(abs(ef(3, 0) + 2 / sqrt(pi()) / 3) < eps);
  CHECK_THROWS_AS(Expression::parse("sqrt(x)").taylor(4), Error);
  CHECK_THROWS_AS(Expression::parse("log(x)").taylor(4), Error);
}

TEST_CASE("taylor of a random analytic kernel matches evaluation") {
  Expression k = Expression::parse("exp(x*t/2)*cos(x - t) + 1/(3 + x*t)");
  OpMatrix<Real> c = k.taylor(60);
  for (double x : {0.1, 0.4, 0.9})
    for (double t : {0.2, 0.7}) {
      Real s = 0;
      for (int i = 0; i <= 60; ++i)
        for (int j = 0; i + j <= 60; ++j) s += c(i, j) * pow(Real(x), i) * pow(Real(t), j);
      // the 1/(3 + xt) tail dominates: (0.63/3)^31 / (1 - 0.21)
      CHECK(abs(s - k.evaluate(Real(x), Real(t))) < ten_to_minus(18));
    }
}

TEST_CASE("symbolic derivative") {
  Expression e = Expression::parse("exp(x) + x^3 - sin(x)*x");
  Expression d = e.derivative_x();
  for (double xd : {0.0, 0.3, 1.0}) {
    Real x = xd;
    Real want = exp(x) + 3 * x * x - cos(x) * x - sin(x);
    CHECK(abs(d.evaluate(x) - want) < tol());
  }
  CHECK(abs(Expression::parse("x^(3/2)").derivative_x().evaluate(Real(4)) - 3) < tol());
  Expression d2 = Expression::parse("x^2").derivative_x().derivative_x().derivative_x();
  CHECK(abs(d2.evaluate(Real(0.7))) < tol());
}

TEST_CASE("to_string round trips") {
  for (const char* text : {"(x + t)^2", "exp(x*t)", "-x^(1/2)/gamma(3/2)", "2^3^2", "x - (t - 1)"}) {
    Expression a = Expression::parse(text);
    Expression b = Expression::parse(a.to_string());
    CHECK(abs(a.evaluate(Real(0.3), Real(0.6)) - b.evaluate(Real(0.3), Real(0.6))) < tol());
  }
}
