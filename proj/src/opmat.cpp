#include "fide/opmat.hpp"

namespace fide {

TruncationPolicy TruncationPolicy::make(int solve_degree, int kernel_degree, int power) {
  if (solve_degree < 0 || kernel_degree < 0 || power < 1) {
    throw Error(ErrorCode::InvalidArgument, "truncation policy: invalid degrees");
  }
  TruncationPolicy p;
  p.solve_degree = solve_degree;
  p.kernel_degree = kernel_degree;
  p.power = power;
  p.working_dim = power * solve_degree + kernel_degree + 1;
  return p;
}

namespace {
void check_dim(int dim, const char* what) {
  if (dim < 1) throw Error(ErrorCode::InvalidArgument, std::string(what) + ": dimension must be >= 1");
}
}  // namespace

template <class T>
OpMatrix<T> build_M(int dim) {
  check_dim(dim, "build_M");
  OpMatrix<T> m(dim, dim, MatrixKind::M);
  for (int i = 0; i + 1 < dim; ++i) m(i + 1, i) = T(i + 1);
  return m;
}

template <class T>
OpMatrix<T> build_N(int dim) {
  check_dim(dim, "build_N");
  OpMatrix<T> n(dim, dim, MatrixKind::N);
  for (int i = 0; i + 1 < dim; ++i) n(i, i + 1) = T(1);
  return n;
}

template <class T>
OpMatrix<T> build_P(int dim) {
  check_dim(dim, "build_P");
  OpMatrix<T> p(dim, dim, MatrixKind::P);
  for (int i = 0; i + 1 < dim; ++i) p(i, i + 1) = T(1) / T(i + 1);
  return p;
}

template <class T>
MonoVec<T> differentiate(const MonoVec<T>& y, const OpMatrix<T>& M, int r) {
  MonoVec<T> v = y;
  for (int k = 0; k < r; ++k) v = MonoVec<T>(row_times<T>(v.span(), M));
  return v;
}

template <class T>
Applied<T> multiply_by_x(const MonoVec<T>& y, const OpMatrix<T>& N, int s) {
  Applied<T> out{y, false};
  const std::size_t w = N.rows();
  for (int k = 0; k < s; ++k) {
    if (!is_zero(out.value[w - 1])) out.truncation_loss = true;
    out.value = MonoVec<T>(row_times<T>(out.value.span(), N));
  }
  return out;
}

template <class T>
Applied<T> antiderivative(const MonoVec<T>& y, const OpMatrix<T>& P) {
  Applied<T> out{MonoVec<T>(row_times<T>(y.span(), P)), false};
  out.truncation_loss = !is_zero(y[P.rows() - 1]);
  return out;
}

template <class T>
T definite_integral(const MonoVec<T>& y, const OpMatrix<T>& P, const T& a, const T& x) {
  Applied<T> yp = antiderivative(y, P);
  if (yp.truncation_loss) {
    throw Error(ErrorCode::TruncationLoss, "definite_integral: degree exceeds working dimension");
  }
  return yp.value.evaluate(x) - yp.value.evaluate(a);
}

template <class T>
MonoVec<T> moment_vector(int dim) {
  check_dim(dim, "moment_vector");
  MonoVec<T> m(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) m[static_cast<std::size_t>(i)] = T(1) / T(i + 1);
  return m;
}

template <class T>
T integrate_unit(const MonoVec<T>& p, const MonoVec<T>& moments) {
  if (p.size() > moments.size()) {
    throw Error(ErrorCode::DimensionMismatch, "integrate_unit: polynomial longer than moment vector");
  }
  T s = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!is_zero(p[i])) s += p[i] * moments[i];
  }
  return s;
}

template <class T>
MonoVec<T> power_vector(const T& a, int dim) {
  MonoVec<T> v(static_cast<std::size_t>(dim));
  T p = 1;
  for (int i = 0; i < dim; ++i) {
    v[static_cast<std::size_t>(i)] = p;
    p *= a;
  }
  return v;
}

#define FIDE_INSTANTIATE(T)                                                          \
  template OpMatrix<T> build_M<T>(int);                                              \
  template OpMatrix<T> build_N<T>(int);                                              \
  template OpMatrix<T> build_P<T>(int);                                              \
  template MonoVec<T> differentiate(const MonoVec<T>&, const OpMatrix<T>&, int);     \
  template Applied<T> multiply_by_x(const MonoVec<T>&, const OpMatrix<T>&, int);     \
  template Applied<T> antiderivative(const MonoVec<T>&, const OpMatrix<T>&);         \
  template T definite_integral(const MonoVec<T>&, const OpMatrix<T>&, const T&, const T&); \
  template MonoVec<T> moment_vector<T>(int);                                         \
  template T integrate_unit(const MonoVec<T>&, const MonoVec<T>&);                   \
  template MonoVec<T> power_vector(const T&, int);

FIDE_INSTANTIATE(Real)
FIDE_INSTANTIATE(Rational)

#undef FIDE_INSTANTIATE

}  // namespace fide
