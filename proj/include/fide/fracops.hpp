#pragma once

// Caputo fractional calculus on the shifted Legendre basis: the monomial
// rule, the diagonal Gamma matrix, the fractional-power projection matrix A,
// the operational matrix H = Phi M^m Gamma A, and quadrature-based oracles
// for the Riemann-Liouville integral and the Caputo derivative.

#include <functional>
#include <optional>

#include "fide/polybasis.hpp"

namespace fide {

/// Order alpha > 0 with m = ceil(alpha), so m - 1 < alpha <= m.
class FracOrder {
 public:
  explicit FracOrder(const Rational& alpha);

  const Rational& alpha() const noexcept { return alpha_; }
  Real alpha_real() const { return to_real(alpha_); }
  int m() const noexcept { return m_; }
  /// m - alpha, in [0, 1).
  Rational nu() const { return Rational(m_) - alpha_; }
  bool is_integer() const noexcept { return nu_zero_; }

  friend bool operator==(const FracOrder& a, const FracOrder& b) { return a.alpha_ == b.alpha_; }

 private:
  Rational alpha_;
  int m_ = 1;
  bool nu_zero_ = false;
};

/// D^alpha x^beta = coefficient * x^exponent.
struct CaputoTerm {
  Real coefficient;
  Rational exponent;
};

CaputoTerm caputo_monomial(const Rational& beta, const FracOrder& order);

/// Diagonal entries Gamma(i+1) / Gamma(m-alpha+i+1). The Rational
/// instantiation requires an integer order.
template <class T>
OpMatrix<T> gamma_matrix(const FracOrder& order, int dim);

/// Legendre coefficients of p_N(x^exponent), exponent > -1/2.
template <class T>
LegVec<T> fractional_power_projection(const Rational& exponent, int N);

/// Row j is fractional_power_projection(m - alpha + j, N), zero-padded to dim.
template <class T>
OpMatrix<T> build_A(const FracOrder& order, int N, int dim);

template <class T>
struct HMatrix {
  OpMatrix<T> entries;
  FracOrder order{1};
  int N = 0;
};

template <class T>
HMatrix<T> build_H(const FracOrder& order, int N, int dim);

/// Legendre coefficients of D^alpha y, i.e. the first N+1 entries of y H.
template <class T>
LegVec<T> apply_H(const LegVec<T>& y, const HMatrix<T>& H);

using RealFunction = std::function<Real(const Real&)>;

/// J^nu g(x) = 1/Gamma(nu) \int_0^x (x-t)^(nu-1) g(t) dt by tanh-sinh after
/// the substitution t = x(1 - v). nu = 0 returns g(x).
/// Throws NON_CONVERGED_QUADRATURE.
Real riemann_liouville_integral(const RealFunction& g, const Real& nu, const Real& x,
                                const Real& tol);

/// m-th derivative by a central finite-difference stencil of order >= 8.
Real finite_difference_derivative(const RealFunction& f, int order, const Real& x);

struct CaputoOracleOptions {
  /// Analytic m-th derivative of f. Finite differences of f are used if empty.
  RealFunction derivative;
  /// Quadrature tolerance; defaults to 10^-(p/2).
  std::optional<Real> tol;
};

/// D^alpha f(x) = J^(m-alpha) f^(m)(x) by direct quadrature. Test oracle only;
/// never used by the solver.
Real caputo_oracle(const RealFunction& f, const FracOrder& order, const Real& x,
                   const CaputoOracleOptions& options = {});

}  // namespace fide
