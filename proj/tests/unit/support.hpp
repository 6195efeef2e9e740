#pragma once

// Independent oracles and helpers shared by the unit tests. Nothing here
// calls into the operational-matrix code paths it is used to check.

#include <random>
#include <vector>

#include "fide/polybasis.hpp"

namespace fide::testing {

inline Rational Q(long n, long d = 1) { return Rational(n, d); }

inline std::vector<Rational> Qs(std::initializer_list<Rational> v) { return v; }

/// Schoolbook polynomial product on monomial coefficients.
inline std::vector<Rational> convolve(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<Rational> r(a.size() + b.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

inline std::vector<Rational> power(const std::vector<Rational>& a, int q) {
  std::vector<Rational> r{Rational(1)};
  for (int k = 0; k < q; ++k) r = convolve(r, a);
  return r;
}

/// Symbolic r-th derivative of monomial coefficients.
inline std::vector<Rational> derivative(std::vector<Rational> a, int r) {
  for (int k = 0; k < r; ++k) {
    if (a.empty()) break;
    std::vector<Rational> d(a.size() > 1 ? a.size() - 1 : 0);
    for (std::size_t i = 1; i < a.size(); ++i) d[i - 1] = a[i] * Rational(static_cast<long>(i));
    a = std::move(d);
  }
  return a;
}

inline std::vector<Rational> trimmed(std::vector<Rational> a) {
  while (!a.empty() && a.back().is_zero()) a.pop_back();
  return a;
}

inline Rational evaluate(const std::vector<Rational>& a, const Rational& x) {
  Rational s = 0;
  for (std::size_t i = a.size(); i-- > 0;) s = s * x + a[i];
  return s;
}

/// Random rational with numerator in [-n, n] and denominator in [1, d].
inline Rational random_rational(std::mt19937_64& rng, int n = 9, int d = 7) {
  std::uniform_int_distribution<int> num(-n, n);
  std::uniform_int_distribution<int> den(1, d);
  return Rational(num(rng), den(rng));
}

inline std::vector<Rational> random_poly(std::mt19937_64& rng, int degree) {
  std::vector<Rational> p(static_cast<std::size_t>(degree) + 1);
  for (auto& c : p) c = random_rational(rng);
  return p;
}

inline Real max_abs_diff(const std::vector<Real>& a, const std::vector<Real>& b) {
  Real m = 0;
  const std::size_t n = std::max(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    Real ai = i < a.size() ? a[i] : Real(0);
    Real bi = i < b.size() ? b[i] : Real(0);
    Real d = boost::multiprecision::abs(ai - bi);
    if (d > m) m = d;
  }
  return m;
}

inline std::vector<Real> to_reals(const std::vector<Rational>& v) {
  std::vector<Real> out;
  for (const auto& r : v) out.push_back(to_real(r));
  return out;
}

}  // namespace fide::testing
