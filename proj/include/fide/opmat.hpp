#pragma once

// Truncated operational matrices for d/dx (M), multiplication by x (N) and
// integration (P) acting on monomial row vectors, plus the moment vector.

#include "fide/polybasis.hpp"

namespace fide {

/// Working dimension for a solve of degree N with kernel degree d_K and
/// power q: every monomial vector on the solve path fits in q*N + d_K + 1.
struct TruncationPolicy {
  int solve_degree = 0;
  int kernel_degree = 0;
  int power = 1;
  int working_dim = 1;

  static TruncationPolicy make(int solve_degree, int kernel_degree, int power);
};

template <class T>
OpMatrix<T> build_M(int dim);
template <class T>
OpMatrix<T> build_N(int dim);
template <class T>
OpMatrix<T> build_P(int dim);

/// Result of applying a truncated matrix; `truncation_loss` is set when a
/// nonzero coefficient was pushed past the working dimension.
template <class T>
struct Applied {
  MonoVec<T> value;
  bool truncation_loss = false;
};

/// y M^r: r-th derivative.
template <class T>
MonoVec<T> differentiate(const MonoVec<T>& y, const OpMatrix<T>& M, int r = 1);

/// y N^s: multiplication by x^s.
template <class T>
Applied<T> multiply_by_x(const MonoVec<T>& y, const OpMatrix<T>& N, int s = 1);

/// y P: antiderivative with zero constant term.
template <class T>
Applied<T> antiderivative(const MonoVec<T>& y, const OpMatrix<T>& P);

/// y P X_x - y P X_a.
template <class T>
T definite_integral(const MonoVec<T>& y, const OpMatrix<T>& P, const T& a, const T& x);

/// [1, 1/2, ..., 1/W]: P^T p = \int_0^1 p(t) dt.
template <class T>
MonoVec<T> moment_vector(int dim);

/// Dot product of a monomial vector with the moment vector.
template <class T>
T integrate_unit(const MonoVec<T>& p, const MonoVec<T>& moments);

/// X_a = [1, a, a^2, ...].
template <class T>
MonoVec<T> power_vector(const T& a, int dim);

}  // namespace fide
