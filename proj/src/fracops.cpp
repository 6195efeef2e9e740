#include "fide/fracops.hpp"

#include <map>
#include <memory>
#include <mutex>

#include "fide/opmat.hpp"
#include "fide/quadrature.hpp"

namespace fide {

using boost::multiprecision::pow;
using boost::multiprecision::tgamma;

FracOrder::FracOrder(const Rational& alpha) : alpha_(alpha) {
  if (alpha <= 0) throw Error(ErrorCode::InvalidArgument, "fractional order must be positive");
  Integer num = boost::multiprecision::numerator(alpha);
  Integer den = boost::multiprecision::denominator(alpha);
  Integer q = num / den;
  if (q * den != num) q += 1;  // ceiling for positive alpha
  m_ = static_cast<int>(q);
  nu_zero_ = Rational(m_) == alpha_;
}

namespace {

bool nonpositive_integer(const Rational& r) { return is_integer(r) && r <= 0; }

// Gamma(a+1) / Gamma(b+1) for real a, b > -1 at run precision.
Real gamma_ratio(const Rational& a, const Rational& b) {
  if (nonpositive_integer(b + 1)) return Real(0);
  return tgamma(to_real(a) + 1) / tgamma(to_real(b) + 1);
}

}  // namespace

CaputoTerm caputo_monomial(const Rational& beta, const FracOrder& order) {
  if (beta < 0) throw Error(ErrorCode::InvalidArgument, "caputo_monomial: beta must be >= 0");
  const Rational exponent = beta - order.alpha();
  if (is_integer(beta) && beta < order.m()) return CaputoTerm{Real(0), exponent};
  return CaputoTerm{gamma_ratio(beta, exponent), exponent};
}

template <>
OpMatrix<Rational> gamma_matrix<Rational>(const FracOrder& order, int dim) {
  if (!order.is_integer()) {
    throw Error(ErrorCode::InvalidArgument,
                "gamma_matrix: exact arithmetic requires an integer order");
  }
  return OpMatrix<Rational>::identity(static_cast<std::size_t>(dim), MatrixKind::Gamma);
}

template <>
OpMatrix<Real> gamma_matrix<Real>(const FracOrder& order, int dim) {
  if (dim < 1) throw Error(ErrorCode::InvalidArgument, "gamma_matrix: dimension must be >= 1");
  OpMatrix<Real> g(dim, dim, MatrixKind::Gamma);
  const Real nu = to_real(order.nu());
  // Gamma(i+1)/Gamma(nu+i+1) = (i/(nu+i)) * previous
  Real r = 1 / tgamma(nu + 1);
  g(0, 0) = r;
  for (int i = 1; i < dim; ++i) {
    r = r * Real(i) / (nu + Real(i));
    g(i, i) = r;
  }
  return g;
}

namespace {

const std::vector<Rational>& projection_rational(const Rational& exponent, int N) {
  static std::map<std::pair<std::string, int>, std::unique_ptr<std::vector<Rational>>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(exponent.str(), N);
  auto it = cache.find(key);
  if (it != cache.end()) return *it->second;
  const OpMatrix<Rational> phi = phi_matrix<Rational>(N + 1);
  std::vector<Rational> denom_inv(static_cast<std::size_t>(N) + 1);
  for (int k = 0; k <= N; ++k) denom_inv[static_cast<std::size_t>(k)] = 1 / (exponent + k + 1);
  auto a = std::make_unique<std::vector<Rational>>(static_cast<std::size_t>(N) + 1);
  for (int i = 0; i <= N; ++i) {
    Rational s = 0;
    for (int k = 0; k <= i; ++k) s += phi(i, k) * denom_inv[static_cast<std::size_t>(k)];
    (*a)[static_cast<std::size_t>(i)] = Rational(2 * i + 1) * s;
  }
  return *cache.emplace(key, std::move(a)).first->second;
}

}  // namespace

template <class T>
LegVec<T> fractional_power_projection(const Rational& exponent, int N) {
  if (N < 0) throw Error(ErrorCode::InvalidArgument, "fractional_power_projection: negative degree");
  if (exponent <= Rational(-1, 2)) {
    throw Error(ErrorCode::InvalidArgument,
                "fractional_power_projection: exponent must exceed -1/2");
  }
  const std::vector<Rational>& a = projection_rational(exponent, N);
  std::vector<T> out;
  out.reserve(a.size());
  for (const Rational& v : a) out.push_back(from_rational<T>(v));
  return LegVec<T>(std::move(out));
}

template <class T>
OpMatrix<T> build_A(const FracOrder& order, int N, int dim) {
  if (dim < N + 1) throw Error(ErrorCode::DimensionMismatch, "build_A: dimension below N+1");
  OpMatrix<T> a(dim, dim, MatrixKind::A);
  const Rational nu = order.nu();
  for (int j = 0; j < dim; ++j) {
    const std::vector<Rational>& row = projection_rational(nu + j, N);
    for (int i = 0; i <= N; ++i) a(j, i) = from_rational<T>(row[static_cast<std::size_t>(i)]);
  }
  return a;
}

template <class T>
HMatrix<T> build_H(const FracOrder& order, int N, int dim) {
  OpMatrix<T> phi = phi_matrix<T>(dim);
  OpMatrix<T> m = build_M<T>(dim);
  OpMatrix<T> lhs = phi;
  for (int k = 0; k < order.m(); ++k) lhs = multiply(lhs, m);
  lhs = multiply(lhs, gamma_matrix<T>(order, dim));
  OpMatrix<T> h = multiply(lhs, build_A<T>(order, N, dim), MatrixKind::H);
  return HMatrix<T>{std::move(h), order, N};
}

template <class T>
LegVec<T> apply_H(const LegVec<T>& y, const HMatrix<T>& H) {
  const std::size_t w = H.entries.rows();
  if (y.size() > w) throw Error(ErrorCode::DimensionMismatch, "apply_H: vector longer than H");
  LegVec<T> padded = y.resized(w);
  std::vector<T> r = row_times<T>(padded.span(), H.entries);
  r.resize(static_cast<std::size_t>(H.N) + 1);
  return LegVec<T>(std::move(r));
}

Real riemann_liouville_integral(const RealFunction& g, const Real& nu, const Real& x,
                                const Real& tol) {
  if (nu.is_zero()) return g(x);
  if (nu < 0) throw Error(ErrorCode::InvalidArgument, "riemann_liouville_integral: nu < 0");
  if (x <= 0) return Real(0);
  const Real nu_minus_one = nu - 1;
  const bool integer_nu = nu == boost::multiprecision::floor(nu);
  auto integrand = [&](const Real& v, const Real& vc) -> Real {
    Real weight = integer_nu && nu == 1 ? Real(1) : pow(v, nu_minus_one);
    return weight * g(x * vc);
  };
  const Real scale = pow(x, nu) / tgamma(nu);
  QuadratureResult r = tanh_sinh(integrand, tol / (abs(scale) + 1));
  if (!r.converged) {
    throw Error(ErrorCode::NonConvergedQuadrature,
                "riemann_liouville_integral: no convergence at x = " + format_sci(x, 8));
  }
  return scale * r.value;
}

namespace {

// Fornberg's recursion for finite-difference weights on integer offsets.
std::vector<Rational> stencil_weights(int derivative, int radius) {
  const int n = 2 * radius + 1;
  std::vector<Rational> z(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) z[static_cast<std::size_t>(i)] = Rational(i - radius);
  std::vector<std::vector<Rational>> c(static_cast<std::size_t>(n),
                                       std::vector<Rational>(static_cast<std::size_t>(derivative) + 1));
  Rational c1 = 1;
  Rational c4 = z[0];
  c[0][0] = 1;
  for (int i = 1; i < n; ++i) {
    const std::size_t ui = static_cast<std::size_t>(i);
    const int mn = std::min(i, derivative);
    Rational c2 = 1;
    Rational c5 = c4;
    c4 = z[ui];
    for (int j = 0; j < i; ++j) {
      const std::size_t uj = static_cast<std::size_t>(j);
      Rational c3 = z[ui] - z[uj];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) {
          const std::size_t uk = static_cast<std::size_t>(k);
          c[ui][uk] = c1 * (Rational(k) * c[ui - 1][uk - 1] - c5 * c[ui - 1][uk]) / c2;
        }
        c[ui][0] = -c1 * c5 * c[ui - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) {
        const std::size_t uk = static_cast<std::size_t>(k);
        c[uj][uk] = (c4 * c[uj][uk] - Rational(k) * c[uj][uk - 1]) / c3;
      }
      c[uj][0] = c4 * c[uj][0] / c3;
    }
    c1 = c2;
  }
  std::vector<Rational> w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] = c[static_cast<std::size_t>(i)][static_cast<std::size_t>(derivative)];
  return w;
}

}  // namespace

Real finite_difference_derivative(const RealFunction& f, int order, const Real& x) {
  if (order == 0) return f(x);
  const int radius = 4 + (order + 1) / 2;
  const std::vector<Rational> w = stencil_weights(order, radius);
  const int span = 2 * radius + 1;
  const Real h = ten_to_minus(Real(working_digits()) / Real(span));
  Real s = 0;
  for (int i = 0; i < span; ++i) {
    const Rational& wi = w[static_cast<std::size_t>(i)];
    if (wi.is_zero()) continue;
    s += to_real(wi) * f(x + Real(i - radius) * h);
  }
  return s / pow(h, Real(order));
}

Real caputo_oracle(const RealFunction& f, const FracOrder& order, const Real& x,
                   const CaputoOracleOptions& options) {
  const int m = order.m();
  RealFunction dm = options.derivative;
  if (!dm) dm = [&f, m](const Real& t) { return finite_difference_derivative(f, m, t); };
  if (order.is_integer()) return dm(x);
  if (x < 0) throw Error(ErrorCode::InvalidArgument, "caputo_oracle: x must be in (0,1]");
  const Real tol = options.tol ? *options.tol : ten_to_minus(precision() / 2);
  return riemann_liouville_integral(dm, to_real(order.nu()), x, tol);
}

#define FIDE_INSTANTIATE(T)                                                        \
  template LegVec<T> fractional_power_projection<T>(const Rational&, int);         \
  template OpMatrix<T> build_A<T>(const FracOrder&, int, int);                     \
  template HMatrix<T> build_H<T>(const FracOrder&, int, int);                      \
  template LegVec<T> apply_H(const LegVec<T>&, const HMatrix<T>&);

FIDE_INSTANTIATE(Real)
FIDE_INSTANTIATE(Rational)

#undef FIDE_INSTANTIATE

}  // namespace fide
