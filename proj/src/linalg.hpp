#pragma once

// Dense LU with partial pivoting for the small Newton systems.

#include <string>
#include <utility>
#include <vector>

#include "fide/error.hpp"
#include "fide/polybasis.hpp"

namespace fide::detail {

inline Real magnitude(const Real& v) { return abs(v); }
inline Real magnitude(const Rational& v) { return to_real(abs(v)); }

template <class T>
Real inf_norm(const OpMatrix<T>& a) {
  Real best = 0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Real s = 0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += magnitude(a(i, j));
    if (s > best) best = s;
  }
  return best;
}

template <class T>
class LuFactor {
 public:
  /// Throws SINGULAR_JACOBIAN when a pivot falls below 10^-(working-5) ||A||.
  explicit LuFactor(OpMatrix<T> a) : lu_(std::move(a)), perm_(lu_.rows()) {
    const std::size_t n = lu_.rows();
    if (lu_.cols() != n) throw Error(ErrorCode::DimensionMismatch, "LU of a non-square matrix");
    for (std::size_t i = 0; i < n; ++i) perm_[i] = i;
    const Real norm = inf_norm(lu_);
    const Real floor = norm * ten_to_minus(working_digits() - 5);
    Real pmax = 0;
    Real pmin = -1;
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t p = k;
      Real best = magnitude(lu_(k, k));
      for (std::size_t i = k + 1; i < n; ++i) {
        Real v = magnitude(lu_(i, k));
        if (v > best) best = v, p = i;
      }
      if (best > pmax) pmax = best;
      if (pmin < 0 || best < pmin) pmin = best;
      if (best <= floor || best.is_zero()) {
        Real estimate = best.is_zero() ? Real(-1) : pmax / best;
        throw Error(ErrorCode::SingularJacobian,
                    "singular Jacobian at column " + std::to_string(k) + " (condition estimate " +
                        (estimate < 0 ? std::string("inf") : format_sci(estimate, 6)) + ")");
      }
      if (p != k) {
        for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
        std::swap(perm_[k], perm_[p]);
      }
      for (std::size_t i = k + 1; i < n; ++i) {
        if (is_zero(lu_(i, k))) continue;
        T f = lu_(i, k) / lu_(k, k);
        lu_(i, k) = f;
        for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= f * lu_(k, j);
      }
    }
    pivot_ratio_ = pmin > 0 ? pmax / pmin : Real(0);
  }

  std::vector<T> solve(const std::vector<T>& b) const {
    const std::size_t n = lu_.rows();
    std::vector<T> x(n);
    for (std::size_t i = 0; i < n; ++i) {
      T s = b[perm_[i]];
      for (std::size_t j = 0; j < i; ++j) s -= lu_(i, j) * x[j];
      x[i] = s;
    }
    for (std::size_t i = n; i-- > 0;) {
      T s = x[i];
      for (std::size_t j = i + 1; j < n; ++j) s -= lu_(i, j) * x[j];
      x[i] = s / lu_(i, i);
    }
    return x;
  }

  /// max |u_kk| / min |u_kk|, a cheap lower bound on the condition number.
  const Real& pivot_ratio() const noexcept { return pivot_ratio_; }

 private:
  OpMatrix<T> lu_;
  std::vector<std::size_t> perm_;
  Real pivot_ratio_;
};

}  // namespace fide::detail
