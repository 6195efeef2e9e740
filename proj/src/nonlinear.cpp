#include "fide/nonlinear.hpp"

#include <algorithm>

#include "fide/error.hpp"

namespace fide {
namespace {

constexpr int kProbeGrid = 11;

template <class T>
void check_dim(const LegVec<T>& y, int dim) {
  if (dim < 1 || y.size() > static_cast<std::size_t>(dim)) {
    throw Error(ErrorCode::DimensionMismatch, "coefficient vector of length " + std::to_string(y.size()) +
                                                  " does not fit working dimension " + std::to_string(dim));
  }
}

Real truncation_error(const OpMatrix<Real>& taylor, int degree, const KernelSpec& spec) {
  Real worst = 0;
  for (int a = 0; a < kProbeGrid; ++a) {
    for (int b = 0; b < kProbeGrid; ++b) {
      Real x = Real(a) / (kProbeGrid - 1);
      Real t = Real(b) / (kProbeGrid - 1);
      Real s = 0;
      Real xi = 1;
      for (int i = 0; i <= degree; ++i) {
        Real tj = 1;
        for (int j = 0; i + j <= degree; ++j) {
          s += taylor(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) * xi * tj;
          tj *= t;
        }
        xi *= x;
      }
      Real e = abs(spec.expression.evaluate(x, t) - s);
      if (e > worst) worst = e;
    }
  }
  return worst;
}

OpMatrix<Real> truncated(const OpMatrix<Real>& taylor, int degree) {
  const auto n = static_cast<std::size_t>(degree + 1);
  OpMatrix<Real> k(n, n, MatrixKind::K);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; i + j < n; ++j) k(i, j) = taylor(i, j);
  return k;
}

int top_index(const std::vector<Real>& v) {
  for (std::size_t i = v.size(); i-- > 0;)
    if (!v[i].is_zero()) return static_cast<int>(i);
  return -1;
}
int top_index(const std::vector<Rational>& v) {
  for (std::size_t i = v.size(); i-- > 0;)
    if (!v[i].is_zero()) return static_cast<int>(i);
  return -1;
}

template <class T>
std::vector<T> moment_sums(const std::vector<T>& b, std::size_t count) {
  // mu_j = \int_0^1 t^j b(t) dt
  std::vector<T> mu(count, T(0));
  for (std::size_t j = 0; j < count; ++j) {
    T s = 0;
    for (std::size_t l = 0; l < b.size(); ++l) {
      if (is_zero(b[l])) continue;
      s += b[l] / T(static_cast<long>(j + l + 1));
    }
    mu[j] = s;
  }
  return mu;
}

}  // namespace

KernelSpec KernelSpec::from_expression(const Expression& e, int degree) {
  KernelSpec k;
  k.expression = e;
  if (auto grid = e.bivariate_polynomial()) {
    k.form = Form::Polynomial;
    k.coefficients = *grid;
    k.degree = static_cast<int>(std::max(grid->rows(), grid->cols())) - 1;
  } else {
    k.form = Form::Analytic;
    k.degree = degree;
    (void)e.taylor(2);  // throws if not analytic at the origin
  }
  return k;
}

KernelSpec KernelSpec::polynomial(const OpMatrix<Rational>& grid) {
  KernelSpec k;
  k.form = Form::Polynomial;
  k.coefficients = grid;
  k.coefficients.set_kind(MatrixKind::K);
  k.degree = static_cast<int>(std::max(grid.rows(), grid.cols())) - 1;
  // pointwise definition rebuilt from the grid
  ExprPtr sum = Expression::constant(0).root();
  for (std::size_t i = 0; i < grid.rows(); ++i) {
    for (std::size_t j = 0; j < grid.cols(); ++j) {
      if (grid(i, j).is_zero()) continue;
      auto term = std::make_shared<const ExprNode>(ExprNode{ExprOp::Number, grid(i, j), nullptr, nullptr});
      auto power = [](ExprOp var, std::size_t e) {
        auto v = std::make_shared<const ExprNode>(ExprNode{var, Rational(0), nullptr, nullptr});
        auto ex = std::make_shared<const ExprNode>(ExprNode{ExprOp::Number, Rational(static_cast<long>(e)), nullptr, nullptr});
        return std::make_shared<const ExprNode>(ExprNode{ExprOp::Pow, Rational(0), v, ex});
      };
      ExprPtr p = std::make_shared<const ExprNode>(
          ExprNode{ExprOp::Mul, Rational(0), term,
                   std::make_shared<const ExprNode>(
                       ExprNode{ExprOp::Mul, Rational(0), power(ExprOp::VarX, i), power(ExprOp::VarT, j)})});
      sum = std::make_shared<const ExprNode>(ExprNode{ExprOp::Add, Rational(0), sum, p});
    }
  }
  k.expression = Expression(sum);
  return k;
}

Real KernelSpec::evaluate(const Real& x, const Real& t) const { return expression.evaluate(x, t); }

KernelGrid resolve_kernel(const KernelSpec& spec) {
  KernelGrid g;
  if (spec.form == KernelSpec::Form::Polynomial) {
    g.exact = spec.coefficients;
    g.real = convert<Real>(spec.coefficients);
    g.degree = static_cast<int>(std::max(spec.coefficients.rows(), spec.coefficients.cols())) - 1;
    g.truncation_bound = 0;
    return g;
  }
  if (spec.degree >= 0) {
    OpMatrix<Real> t = spec.expression.taylor(spec.degree);
    g.real = t;
    g.degree = spec.degree;
    g.truncation_bound = truncation_error(t, spec.degree, spec);
    return g;
  }
  const Real target = ten_to_minus(precision() / 2);
  for (int cap = 8; cap <= 256; cap *= 2) {
    OpMatrix<Real> t = spec.expression.taylor(cap);
    // errors are monotone in practice; bisect on the smallest passing degree
    if (truncation_error(t, cap, spec) >= target) continue;
    int lo = 0, hi = cap;
    while (lo < hi) {
      int mid = (lo + hi) / 2;
      if (truncation_error(t, mid, spec) < target)
        hi = mid;
      else
        lo = mid + 1;
    }
    g.real = truncated(t, hi);
    g.degree = hi;
    g.truncation_bound = truncation_error(t, hi, spec);
    return g;
  }
  throw Error(ErrorCode::ValidationError,
              "kernel Taylor series does not reach the truncation target within degree 256");
}

template <class T>
OpMatrix<T> build_Y(const LegVec<T>& y, int dim) {
  check_dim(y, dim);
  MonoVec<T> c = to_mono(y, dim);
  const auto n = static_cast<std::size_t>(dim);
  OpMatrix<T> Y(n, n, MatrixKind::Y);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) Y(i, j) = c[j - i];
  return Y;
}

template <class T>
Applied<T> power_coeffs(const LegVec<T>& y, int q, int dim) {
  if (q < 0) throw Error(ErrorCode::InvalidArgument, "power must be non-negative");
  check_dim(y, dim);
  Applied<T> r;
  if (q == 0) {
    r.value = MonoVec<T>(static_cast<std::size_t>(dim));
    r.value[0] = T(1);
    return r;
  }
  MonoVec<T> c = to_mono(y, dim);
  const int deg = c.degree();
  r.truncation_loss = deg > 0 && static_cast<long>(q) * deg >= dim;
  if (q == 1) {
    r.value = c;
    return r;
  }
  OpMatrix<T> Y = build_Y(y, dim);
  std::vector<T> b = c.coeffs();
  for (int k = 1; k < q; ++k) b = row_times(std::span<const T>(b), Y);
  r.value = MonoVec<T>(std::move(b));
  return r;
}

template <>
OpMatrix<Real> kernel_matrix<Real>(const KernelSpec& spec, int dim) {
  KernelGrid g = resolve_kernel(spec);
  const auto n = static_cast<std::size_t>(dim);
  if (g.real.rows() > n || g.real.cols() > n) {
    throw Error(ErrorCode::DimensionMismatch, "kernel degree " + std::to_string(g.degree) +
                                                  " exceeds working dimension " + std::to_string(dim));
  }
  OpMatrix<Real> K(n, n, MatrixKind::K);
  for (std::size_t i = 0; i < g.real.rows(); ++i)
    for (std::size_t j = 0; j < g.real.cols(); ++j) K(i, j) = g.real(i, j);
  return K;
}

template <>
OpMatrix<Rational> kernel_matrix<Rational>(const KernelSpec& spec, int dim) {
  if (spec.form != KernelSpec::Form::Polynomial) {
    throw Error(ErrorCode::InvalidArgument, "exact kernel grid requires a polynomial kernel");
  }
  const auto n = static_cast<std::size_t>(dim);
  const OpMatrix<Rational>& k = spec.coefficients;
  if (k.rows() > n || k.cols() > n) {
    throw Error(ErrorCode::DimensionMismatch, "kernel degree exceeds working dimension");
  }
  OpMatrix<Rational> K(n, n, MatrixKind::K);
  for (std::size_t i = 0; i < k.rows(); ++i)
    for (std::size_t j = 0; j < k.cols(); ++j) K(i, j) = k(i, j);
  return K;
}

template <class T>
DeltaMatrix<T> build_Delta(const LegVec<T>& y, int q, int dim) {
  Applied<T> b = power_coeffs(y, q, dim);
  const auto n = static_cast<std::size_t>(dim);
  DeltaMatrix<T> d{OpMatrix<T>(n, n, MatrixKind::Delta), y, q, b.truncation_loss};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) d.entries(i, j) = b.value[j - i];
  return d;
}

template <class T>
Applied<T> fredholm_term(const LegVec<T>& y, const OpMatrix<T>& K, int q, const T& lambda, int dim) {
  Applied<T> b = power_coeffs(y, q, dim);
  Applied<T> r;
  r.truncation_loss = b.truncation_loss;
  r.value = MonoVec<T>(static_cast<std::size_t>(dim));
  if (is_zero(lambda)) return r;
  std::vector<T> mu = moment_sums(b.value.coeffs(), K.cols());
  for (std::size_t i = 0; i < K.rows(); ++i) {
    T s = 0;
    for (std::size_t j = 0; j < K.cols(); ++j) {
      if (is_zero(K(i, j))) continue;
      s += K(i, j) * mu[j];
    }
    if (is_zero(s)) continue;
    if (i >= static_cast<std::size_t>(dim)) {
      r.truncation_loss = true;
      continue;
    }
    r.value[i] = lambda * s;
  }
  return r;
}

template <class T>
Applied<T> fredholm_term(const LegVec<T>& y, const KernelSpec& kernel, int q, const T& lambda, int dim) {
  return fredholm_term(y, kernel_matrix<T>(kernel, dim), q, lambda, dim);
}

template <class T>
OpMatrix<T> fredholm_jacobian(const LegVec<T>& y, const OpMatrix<T>& K, int q, const T& lambda, int dim) {
  const std::size_t n = y.size();
  OpMatrix<T> J(n, static_cast<std::size_t>(dim));
  if (is_zero(lambda)) return J;
  std::vector<T> g = power_coeffs(y, q - 1, dim).value.coeffs();
  for (T& v : g) v *= T(q);
  g.resize(static_cast<std::size_t>(std::max(top_index(g), 0) + 1));
  const OpMatrix<T> phi = phi_matrix<T>(static_cast<int>(n));
  for (std::size_t k = 0; k < n; ++k) {
    // p_k = g * L_{1,k}
    std::vector<T> p(g.size() + k, T(0));
    for (std::size_t a = 0; a < g.size(); ++a) {
      if (is_zero(g[a])) continue;
      for (std::size_t l = 0; l <= k; ++l) p[a + l] += g[a] * phi(k, l);
    }
    std::vector<T> mu = moment_sums(p, K.cols());
    for (std::size_t i = 0; i < std::min(K.rows(), J.cols()); ++i) {
      T s = 0;
      for (std::size_t j = 0; j < K.cols(); ++j) {
        if (is_zero(K(i, j))) continue;
        s += K(i, j) * mu[j];
      }
      J(k, i) = lambda * s;
    }
  }
  return J;
}

#define FIDE_INSTANTIATE(T)                                                                        \
  template OpMatrix<T> build_Y(const LegVec<T>&, int);                                             \
  template Applied<T> power_coeffs(const LegVec<T>&, int, int);                                    \
  template DeltaMatrix<T> build_Delta(const LegVec<T>&, int, int);                                 \
  template Applied<T> fredholm_term(const LegVec<T>&, const OpMatrix<T>&, int, const T&, int);     \
  template Applied<T> fredholm_term(const LegVec<T>&, const KernelSpec&, int, const T&, int);      \
  template OpMatrix<T> fredholm_jacobian(const LegVec<T>&, const OpMatrix<T>&, int, const T&, int);

FIDE_INSTANTIATE(Real)
FIDE_INSTANTIATE(Rational)

#undef FIDE_INSTANTIATE

}  // namespace fide
