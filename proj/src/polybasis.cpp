#include "fide/polybasis.hpp"

#include <map>
#include <memory>
#include <mutex>

#include "fide/quadrature.hpp"

namespace fide {

using boost::multiprecision::abs;

template <class T>
int MonoVec<T>::degree() const {
  for (int i = static_cast<int>(c_.size()) - 1; i >= 0; --i) {
    if (!is_zero(c_[static_cast<std::size_t>(i)])) return i;
  }
  return -1;
}

template <class T>
MonoVec<T> MonoVec<T>::resized(std::size_t dim) const {
  std::vector<T> c(dim, T(0));
  for (std::size_t i = 0; i < std::min(dim, c_.size()); ++i) c[i] = c_[i];
  return MonoVec(std::move(c));
}

template <class T>
T MonoVec<T>::evaluate(const T& x) const {
  T s = 0;
  for (std::size_t i = c_.size(); i-- > 0;) s = s * x + c_[i];
  return s;
}

template <class T>
int LegVec<T>::degree() const {
  for (int i = static_cast<int>(c_.size()) - 1; i >= 0; --i) {
    if (!is_zero(c_[static_cast<std::size_t>(i)])) return i;
  }
  return -1;
}

template <class T>
LegVec<T> LegVec<T>::resized(std::size_t dim) const {
  std::vector<T> c(dim, T(0));
  for (std::size_t i = 0; i < std::min(dim, c_.size()); ++i) c[i] = c_[i];
  return LegVec(std::move(c));
}

template <class T>
T LegVec<T>::evaluate(const T& x) const {
  if (c_.empty()) return T(0);
  const T s = 2 * x - 1;
  T p0 = 1;
  T p1 = s;
  T sum = c_[0];
  if (c_.size() > 1) sum += c_[1] * p1;
  for (std::size_t k = 1; k + 1 < c_.size(); ++k) {
    T p2 = (T(2 * k + 1) * s * p1 - T(k) * p0) / T(k + 1);
    sum += c_[k + 1] * p2;
    p0 = std::move(p1);
    p1 = std::move(p2);
  }
  return sum;
}

template <class T>
T LegVec<T>::derivative(const T& x) const {
  // d/dx L_{1,k}(x) = 2 P_k'(s) with P_{k+1}' = P_{k-1}' + (2k+1) P_k.
  if (c_.size() < 2) return T(0);
  const T s = 2 * x - 1;
  T p_prev = 1;
  T p = s;
  T d_prev = 0;
  T d = 1;
  T sum = c_[1];
  for (std::size_t k = 1; k + 1 < c_.size(); ++k) {
    T d_next = d_prev + T(2 * k + 1) * p;
    T p_next = (T(2 * k + 1) * s * p - T(k) * p_prev) / T(k + 1);
    sum += c_[k + 1] * d_next;
    d_prev = std::move(d);
    d = std::move(d_next);
    p_prev = std::move(p);
    p = std::move(p_next);
  }
  return 2 * sum;
}

const char* to_string(MatrixKind kind) noexcept {
  switch (kind) {
    case MatrixKind::Phi: return "PHI";
    case MatrixKind::M: return "M";
    case MatrixKind::N: return "N";
    case MatrixKind::P: return "P";
    case MatrixKind::Gamma: return "GAMMA";
    case MatrixKind::A: return "A";
    case MatrixKind::H: return "H";
    case MatrixKind::Y: return "Y";
    case MatrixKind::Delta: return "DELTA";
    case MatrixKind::K: return "K";
    case MatrixKind::Generic: return "GENERIC";
  }
  return "GENERIC";
}

template <class T>
bool OpMatrix<T>::is_lower_triangular() const {
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i + 1; j < cols_; ++j)
      if (!is_zero((*this)(i, j))) return false;
  return true;
}

template <class T>
bool OpMatrix<T>::is_upper_triangular() const {
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < std::min(i, cols_); ++j)
      if (!is_zero((*this)(i, j))) return false;
  return true;
}

template <class T>
bool OpMatrix<T>::is_diagonal() const {
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if (i != j && !is_zero((*this)(i, j))) return false;
  return true;
}

template <class T>
bool OpMatrix<T>::is_upper_toeplitz() const {
  if (!is_upper_triangular()) return false;
  for (std::size_t i = 1; i < rows_; ++i)
    for (std::size_t j = i; j < cols_; ++j)
      if ((*this)(i, j) != (*this)(i - 1, j - 1)) return false;
  return true;
}

template <class T>
OpMatrix<T> multiply(const OpMatrix<T>& a, const OpMatrix<T>& b, MatrixKind kind) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "matrix product: inner dimensions differ");
  }
  OpMatrix<T> c(a.rows(), b.cols(), kind);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const T& aik = a(i, k);
      if (is_zero(aik)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        if (!is_zero(b(k, j))) c(i, j) += aik * b(k, j);
      }
    }
  }
  return c;
}

template <class T>
std::vector<T> row_times(std::span<const T> v, const OpMatrix<T>& m) {
  if (v.size() != m.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "row vector length differs from matrix rows");
  }
  std::vector<T> out(m.cols(), T(0));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (is_zero(v[i])) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (!is_zero(m(i, j))) out[j] += v[i] * m(i, j);
    }
  }
  return out;
}

template <class To, class From>
OpMatrix<To> convert(const OpMatrix<From>& m) {
  OpMatrix<To> out(m.rows(), m.cols(), m.kind());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = To(m(i, j));
  return out;
}

template <class To, class From>
MonoVec<To> convert(const MonoVec<From>& v) {
  std::vector<To> c;
  c.reserve(v.size());
  for (const From& x : v.coeffs()) c.emplace_back(x);
  return MonoVec<To>(std::move(c));
}

template <class To, class From>
LegVec<To> convert(const LegVec<From>& v) {
  std::vector<To> c;
  c.reserve(v.size());
  for (const From& x : v.coeffs()) c.emplace_back(x);
  return LegVec<To>(std::move(c));
}

MonoVec<Rational> shifted_legendre(int degree) {
  if (degree < 0) throw Error(ErrorCode::InvalidArgument, "negative Legendre degree");
  MonoVec<Rational> p(static_cast<std::size_t>(degree) + 1);
  for (int k = 0; k <= degree; ++k) {
    Rational fk = factorial(k);
    Rational term = factorial(degree + k) / (factorial(degree - k) * fk * fk);
    p[static_cast<std::size_t>(k)] = ((degree + k) % 2 == 0) ? term : Rational(-term);
  }
  return p;
}

namespace {

const OpMatrix<Rational>& phi_rational(int dim) {
  static std::map<int, std::unique_ptr<OpMatrix<Rational>>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(dim);
  if (it != cache.end()) return *it->second;
  auto phi = std::make_unique<OpMatrix<Rational>>(dim, dim, MatrixKind::Phi);
  for (int i = 0; i < dim; ++i) {
    MonoVec<Rational> row = shifted_legendre(i);
    for (int k = 0; k <= i; ++k) (*phi)(i, k) = row[static_cast<std::size_t>(k)];
  }
  return *cache.emplace(dim, std::move(phi)).first->second;
}

const OpMatrix<Rational>& phi_inverse_rational(int dim) {
  // x^j = sum_{k<=j} (2k+1) j!^2 / ((j+k+1)! (j-k)!) L_{1,k}(x)
  static std::map<int, std::unique_ptr<OpMatrix<Rational>>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(dim);
  if (it != cache.end()) return *it->second;
  auto inv = std::make_unique<OpMatrix<Rational>>(dim, dim, MatrixKind::Generic);
  for (int j = 0; j < dim; ++j) {
    Rational fj = factorial(j);
    for (int k = 0; k <= j; ++k) {
      (*inv)(j, k) = Rational(2 * k + 1) * fj * fj / (factorial(j + k + 1) * factorial(j - k));
    }
  }
  return *cache.emplace(dim, std::move(inv)).first->second;
}

}  // namespace

template <>
OpMatrix<Rational> phi_matrix<Rational>(int dim) {
  if (dim < 1) throw Error(ErrorCode::InvalidArgument, "phi_matrix: dimension must be >= 1");
  return phi_rational(dim);
}

template <>
OpMatrix<Real> phi_matrix<Real>(int dim) {
  if (dim < 1) throw Error(ErrorCode::InvalidArgument, "phi_matrix: dimension must be >= 1");
  return convert<Real>(phi_rational(dim));
}

template <>
OpMatrix<Rational> phi_inverse<Rational>(int dim) {
  if (dim < 1) throw Error(ErrorCode::InvalidArgument, "phi_inverse: dimension must be >= 1");
  return phi_inverse_rational(dim);
}

template <>
OpMatrix<Real> phi_inverse<Real>(int dim) {
  if (dim < 1) throw Error(ErrorCode::InvalidArgument, "phi_inverse: dimension must be >= 1");
  return convert<Real>(phi_inverse_rational(dim));
}

template <class T>
T inner_product(const MonoVec<T>& a, const MonoVec<T>& b) {
  T s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (is_zero(a[i])) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (!is_zero(b[j])) s += a[i] * b[j] / T(static_cast<long>(i + j + 1));
    }
  }
  return s;
}

template <class T>
MonoVec<T> to_mono(const LegVec<T>& y, int dim) {
  if (dim < static_cast<int>(y.size())) {
    throw Error(ErrorCode::DimensionMismatch, "to_mono: dimension smaller than coefficient count");
  }
  const OpMatrix<Rational>& phi = phi_rational(std::max(dim, 1));
  std::vector<T> c(static_cast<std::size_t>(dim), T(0));
  for (std::size_t k = 0; k < y.size(); ++k) {
    if (is_zero(y[k])) continue;
    for (std::size_t j = 0; j <= k; ++j) c[j] += y[k] * from_rational<T>(phi(k, j));
  }
  return MonoVec<T>(std::move(c));
}

template <class T>
LegVec<T> to_leg(const MonoVec<T>& p, int N) {
  if (N < 0) throw Error(ErrorCode::InvalidArgument, "to_leg: negative degree");
  const int deg = p.degree();
  std::vector<T> out(static_cast<std::size_t>(N) + 1, T(0));
  if (deg < 0) return LegVec<T>(std::move(out));
  if (deg <= N) {
    // exact: p = c Phi^-1 Phi  => Legendre coefficients are c Phi^-1
    const OpMatrix<Rational>& inv = phi_inverse_rational(deg + 1);
    for (int j = 0; j <= deg; ++j) {
      const T& cj = p[static_cast<std::size_t>(j)];
      if (is_zero(cj)) continue;
      for (int k = 0; k <= j; ++k) out[static_cast<std::size_t>(k)] += cj * from_rational<T>(inv(j, k));
    }
    return LegVec<T>(std::move(out));
  }
  // orthogonal projection: (2k+1) sum_j Phi_kj \int x^j p(x) dx
  const OpMatrix<Rational>& phi = phi_rational(N + 1);
  std::vector<T> moments(static_cast<std::size_t>(N) + 1, T(0));
  for (int j = 0; j <= N; ++j) {
    T s = 0;
    for (int i = 0; i <= deg; ++i) {
      const T& ci = p[static_cast<std::size_t>(i)];
      if (!is_zero(ci)) s += ci / T(i + j + 1);
    }
    moments[static_cast<std::size_t>(j)] = s;
  }
  for (int k = 0; k <= N; ++k) {
    T s = 0;
    for (int j = 0; j <= k; ++j) s += from_rational<T>(phi(k, j)) * moments[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(k)] = T(2 * k + 1) * s;
  }
  return LegVec<T>(std::move(out));
}

std::vector<Real> shifted_legendre_values(int n, const Real& x) {
  std::vector<Real> v(static_cast<std::size_t>(n) + 1);
  const Real s = 2 * x - 1;
  v[0] = 1;
  if (n >= 1) v[1] = s;
  for (int k = 1; k < n; ++k) {
    v[static_cast<std::size_t>(k) + 1] =
        ((2 * k + 1) * s * v[static_cast<std::size_t>(k)] - k * v[static_cast<std::size_t>(k) - 1]) /
        (k + 1);
  }
  return v;
}

LegVec<Real> project_function(const std::function<Real(const Real&)>& f, int N,
                              const ProjectionOptions& options) {
  if (N < 0) throw Error(ErrorCode::InvalidArgument, "project_function: negative degree");
  const std::size_t n = static_cast<std::size_t>(N) + 1;
  const Real tol = ten_to_minus(precision() / 2);
  VectorQuadratureResult r;
  if (options.rule == QuadratureRule::TanhSinh) {
    auto integrand = [&](const Real& x, const Real&, std::vector<Real>& out) {
      Real fx = f(x);
      std::vector<Real> l = shifted_legendre_values(N, x);
      for (std::size_t k = 0; k < n; ++k) out[k] = fx * l[k];
    };
    r = tanh_sinh_vector(integrand, n, tol);
  } else {
    auto integrand = [&](const Real& x, std::vector<Real>& out) {
      Real fx = f(x);
      std::vector<Real> l = shifted_legendre_values(N, x);
      for (std::size_t k = 0; k < n; ++k) out[k] = fx * l[k];
    };
    const int n0 = std::max(32, 2 * N + 2);
    r = gauss_legendre_vector(integrand, n, tol, n0, std::max(options.max_nodes, n0));
  }
  if (!r.converged) {
    throw Error(ErrorCode::NonConvergedQuadrature,
                "project_function: coefficients did not stabilise (last change " +
                    format_sci(r.error_estimate, 6) + ")");
  }
  std::vector<Real> c(n);
  for (std::size_t k = 0; k < n; ++k) c[k] = Real(static_cast<long>(2 * k + 1)) * r.values[k];
  return LegVec<Real>(std::move(c));
}

template class MonoVec<Real>;
template class MonoVec<Rational>;
template class LegVec<Real>;
template class LegVec<Rational>;
template class OpMatrix<Real>;
template class OpMatrix<Rational>;

template OpMatrix<Real> multiply(const OpMatrix<Real>&, const OpMatrix<Real>&, MatrixKind);
template OpMatrix<Rational> multiply(const OpMatrix<Rational>&, const OpMatrix<Rational>&,
                                     MatrixKind);
template std::vector<Real> row_times(std::span<const Real>, const OpMatrix<Real>&);
template std::vector<Rational> row_times(std::span<const Rational>, const OpMatrix<Rational>&);
template OpMatrix<Real> convert<Real, Rational>(const OpMatrix<Rational>&);
template OpMatrix<Real> convert<Real, Real>(const OpMatrix<Real>&);
template MonoVec<Real> convert<Real, Rational>(const MonoVec<Rational>&);
template LegVec<Real> convert<Real, Rational>(const LegVec<Rational>&);
template Real inner_product(const MonoVec<Real>&, const MonoVec<Real>&);
template Rational inner_product(const MonoVec<Rational>&, const MonoVec<Rational>&);
template MonoVec<Real> to_mono(const LegVec<Real>&, int);
template MonoVec<Rational> to_mono(const LegVec<Rational>&, int);
template LegVec<Real> to_leg(const MonoVec<Real>&, int);
template LegVec<Rational> to_leg(const MonoVec<Rational>&, int);

}  // namespace fide
