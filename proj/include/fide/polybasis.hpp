#pragma once

// Shifted Legendre basis on [0,1]: coefficient vectors in the monomial and
// Legendre bases, dense operational matrices, the basis-change matrix Phi,
// and projection of pointwise functions.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "fide/error.hpp"
#include "fide/scalar.hpp"

namespace fide {

/// Coefficients c_i of p(x) = sum_i c_i x^i (a row vector multiplying X_x).
template <class T>
class MonoVec {
 public:
  MonoVec() = default;
  explicit MonoVec(std::size_t dim) : c_(dim, T(0)) {}
  explicit MonoVec(std::vector<T> coeffs) : c_(std::move(coeffs)) {}
  MonoVec(std::initializer_list<T> coeffs) : c_(coeffs) {}

  std::size_t size() const noexcept { return c_.size(); }
  const T& operator[](std::size_t i) const { return c_[i]; }
  T& operator[](std::size_t i) { return c_[i]; }
  const std::vector<T>& coeffs() const noexcept { return c_; }
  std::span<const T> span() const noexcept { return c_; }

  /// Index of the highest nonzero coefficient, -1 for the zero polynomial.
  int degree() const;
  /// Copy zero-padded or cut to `dim`; cutting nonzero entries is the
  /// caller's responsibility to check.
  MonoVec resized(std::size_t dim) const;
  T evaluate(const T& x) const;

  friend bool operator==(const MonoVec&, const MonoVec&) = default;

 private:
  std::vector<T> c_;
};

/// Coefficients y_i of y(x) = sum_i y_i L_{1,i}(x).
template <class T>
class LegVec {
 public:
  LegVec() = default;
  explicit LegVec(std::size_t dim) : c_(dim, T(0)) {}
  explicit LegVec(std::vector<T> coeffs) : c_(std::move(coeffs)) {}
  LegVec(std::initializer_list<T> coeffs) : c_(coeffs) {}

  static LegVec unit(std::size_t dim, std::size_t k) {
    LegVec v(dim);
    v[k] = T(1);
    return v;
  }

  std::size_t size() const noexcept { return c_.size(); }
  const T& operator[](std::size_t i) const { return c_[i]; }
  T& operator[](std::size_t i) { return c_[i]; }
  const std::vector<T>& coeffs() const noexcept { return c_; }
  std::span<const T> span() const noexcept { return c_; }

  int degree() const;
  LegVec resized(std::size_t dim) const;
  /// Three-term recurrence evaluation; never forms monomial coefficients.
  T evaluate(const T& x) const;
  /// First derivative, also by recurrence.
  T derivative(const T& x) const;

  friend bool operator==(const LegVec&, const LegVec&) = default;

 private:
  std::vector<T> c_;
};

enum class MatrixKind { Phi, M, N, P, Gamma, A, H, Y, Delta, K, Generic };

const char* to_string(MatrixKind kind) noexcept;

/// Dense row-major truncation of one of the infinite operational matrices.
template <class T>
class OpMatrix {
 public:
  OpMatrix() = default;
  OpMatrix(std::size_t rows, std::size_t cols, MatrixKind kind = MatrixKind::Generic)
      : rows_(rows), cols_(cols), kind_(kind), a_(rows * cols, T(0)) {}

  static OpMatrix identity(std::size_t n, MatrixKind kind = MatrixKind::Generic) {
    OpMatrix m(n, n, kind);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  MatrixKind kind() const noexcept { return kind_; }
  void set_kind(MatrixKind kind) noexcept { kind_ = kind; }

  const T& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
  T& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }

  bool is_lower_triangular() const;
  bool is_upper_triangular() const;
  bool is_diagonal() const;
  /// Upper triangular and constant along every diagonal.
  bool is_upper_toeplitz() const;

  friend bool operator==(const OpMatrix&, const OpMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  MatrixKind kind_ = MatrixKind::Generic;
  std::vector<T> a_;
};

template <class T>
OpMatrix<T> multiply(const OpMatrix<T>& a, const OpMatrix<T>& b,
                     MatrixKind kind = MatrixKind::Generic);

/// Row vector times matrix, v.size() must equal m.rows().
template <class T>
std::vector<T> row_times(std::span<const T> v, const OpMatrix<T>& m);

template <class To, class From>
OpMatrix<To> convert(const OpMatrix<From>& m);
template <class To, class From>
MonoVec<To> convert(const MonoVec<From>& v);
template <class To, class From>
LegVec<To> convert(const LegVec<From>& v);

/// Exact monomial coefficients of L_{1,i}.
MonoVec<Rational> shifted_legendre(int degree);

/// W x W basis-change matrix; row i holds shifted_legendre(i).
template <class T>
OpMatrix<T> phi_matrix(int dim);

/// Inverse of phi_matrix(dim), lower triangular.
template <class T>
OpMatrix<T> phi_inverse(int dim);

/// \int_0^1 a(x) b(x) dx from the monomial coefficients.
template <class T>
T inner_product(const MonoVec<T>& a, const MonoVec<T>& b);

/// y Phi, zero-padded to `dim` (dim >= y.size()).
template <class T>
MonoVec<T> to_mono(const LegVec<T>& y, int dim);

/// Legendre coefficients 0..N. Exact inversion when deg(p) <= N, the
/// orthogonal projection p_N p otherwise.
template <class T>
LegVec<T> to_leg(const MonoVec<T>& p, int N);

/// L_{1,0}(x) .. L_{1,n}(x) by recurrence.
std::vector<Real> shifted_legendre_values(int n, const Real& x);

enum class QuadratureRule { TanhSinh, GaussLegendre };

struct ProjectionOptions {
  QuadratureRule rule = QuadratureRule::TanhSinh;
  /// Node cap for Gauss-Legendre doubling; level cap is derived for tanh-sinh.
  int max_nodes = 4096;
};

/// p_N f with c_k = (2k+1) \int_0^1 f L_{1,k}. Coefficients are refined by
/// doubling the node count until no coefficient moves by more than 10^(-p/2).
/// Throws NON_CONVERGED_QUADRATURE when the cap is hit first.
LegVec<Real> project_function(const std::function<Real(const Real&)>& f, int N,
                              const ProjectionOptions& options = {});

}  // namespace fide
