#pragma once

// The nonlinear Fredholm term lambda \int_0^1 k(x,t) y(t)^q dt: the Toeplitz
// matrices Y and Delta, powers of y, the kernel coefficient grid K, and the
// assembled term with its Jacobian.

#include <optional>

#include "fide/expr.hpp"
#include "fide/opmat.hpp"

namespace fide {

struct KernelSpec {
  enum class Form { Polynomial, Analytic };

  Form form = Form::Polynomial;
  /// Pointwise definition (always set).
  Expression expression;
  /// Polynomial form: k(x,t) = sum K_ij x^i t^j exactly.
  OpMatrix<Rational> coefficients;
  /// Analytic form: total Taylor degree d_K; -1 picks the smallest degree
  /// whose measured truncation error is below 10^(-p/2).
  int degree = -1;

  /// Polynomial when the expression has rational polynomial form, analytic
  /// otherwise (VALIDATION_ERROR if not analytic at the origin).
  static KernelSpec from_expression(const Expression& e, int degree = -1);
  static KernelSpec polynomial(const OpMatrix<Rational>& k);

  Real evaluate(const Real& x, const Real& t) const;
};

/// The coefficient grid actually used at the current precision.
struct KernelGrid {
  OpMatrix<Real> real;
  std::optional<OpMatrix<Rational>> exact;
  /// Per-variable degree d_K of the grid.
  int degree = 0;
  /// Max |k - truncation| over an 11x11 grid on [0,1]^2; 0 for polynomials.
  Real truncation_bound;
};

KernelGrid resolve_kernel(const KernelSpec& spec);

/// Y_ij = c_(j-i) for j >= i with c = y Phi.
template <class T>
OpMatrix<T> build_Y(const LegVec<T>& y, int dim);

/// Monomial coefficients of y^q, computed as y Phi Y^(q-1). q = 0 gives 1.
/// truncation_loss is set when q deg(y) >= dim.
template <class T>
Applied<T> power_coeffs(const LegVec<T>& y, int q, int dim);

/// dim x dim grid K (zero-padded). The Rational instantiation requires a
/// polynomial kernel.
template <class T>
OpMatrix<T> kernel_matrix(const KernelSpec& spec, int dim);

template <class T>
struct DeltaMatrix {
  OpMatrix<T> entries;
  LegVec<T> built_from;
  int q = 1;
  bool truncation_loss = false;
};

/// Delta_ij = b_(j-i), b = power_coeffs(y, q).
template <class T>
DeltaMatrix<T> build_Delta(const LegVec<T>& y, int q, int dim);

/// Monomial coefficients in x of lambda \int_0^1 k(x,t) y(t)^q dt, assembled
/// from b and moment sums without forming Delta.
template <class T>
Applied<T> fredholm_term(const LegVec<T>& y, const OpMatrix<T>& K, int q, const T& lambda, int dim);

template <class T>
Applied<T> fredholm_term(const LegVec<T>& y, const KernelSpec& kernel, int q, const T& lambda, int dim);

/// Row k holds the monomial coefficients of
/// lambda \int_0^1 k(x,t) q y^(q-1)(t) L_{1,k}(t) dt, for k = 0..y.size()-1.
template <class T>
OpMatrix<T> fredholm_jacobian(const LegVec<T>& y, const OpMatrix<T>& K, int q, const T& lambda, int dim);

}  // namespace fide
