#include "doctest.h"

#include "fide/quadrature.hpp"
#include "support.hpp"

using namespace fide;

TEST_CASE("Gauss-Legendre nodes integrate polynomials exactly") {
  const auto& nodes = gauss_legendre_nodes(10);
  REQUIRE(nodes.size() == 10);
  Real wsum = 0;
  for (const auto& n : nodes) {
    wsum += n.w;
    CHECK(abs(n.x + n.xc - 1) < ten_to_minus(precision()));
  }
  CHECK(abs(wsum - 1) < ten_to_minus(precision()));
  // degree 19 is the highest exact degree for 10 nodes
  Real i19 = gauss_legendre([](const Real& x) { return pow(x, 19); }, 10);
  CHECK(abs(i19 - Real(1) / 20) < ten_to_minus(precision()));
  Real i20 = gauss_legendre([](const Real& x) { return pow(x, 20); }, 10);
  CHECK(abs(i20 - Real(1) / 21) > ten_to_minus(precision()));
}

TEST_CASE("tanh-sinh handles endpoint singularities") {
  const Real tol = ten_to_minus(precision());
  QuadratureResult r = tanh_sinh([](const Real& x, const Real&) { return 1 / sqrt(x); }, tol);
  CHECK(r.converged);
  CHECK(abs(r.value - 2) < ten_to_minus(precision() - 5));

  QuadratureResult s = tanh_sinh([](const Real&, const Real& xc) { return pow(xc, Real(-0.75)); }, tol);
  CHECK(s.converged);
  CHECK(abs(s.value - 4) < ten_to_minus(precision() - 5));

  QuadratureResult l = tanh_sinh([](const Real& x, const Real&) { return log(x); }, tol);
  CHECK(abs(l.value + 1) < ten_to_minus(precision() - 5));
}

TEST_CASE("adaptive Gauss-Legendre reports non-convergence") {
  QuadratureResult r =
      gauss_legendre_adaptive([](const Real& x) { return sqrt(x); }, ten_to_minus(40), 16, 128);
  CHECK_FALSE(r.converged);
  QuadratureResult e = gauss_legendre_adaptive([](const Real& x) { return exp(x); }, ten_to_minus(40));
  CHECK(e.converged);
  CHECK(abs(e.value - (exp(Real(1)) - 1)) < ten_to_minus(45));
}
