#include "fide/tausolver.hpp"

#include <algorithm>
#include <cmath>

#include "fide/analysis.hpp"
#include "fide/error.hpp"
#include "linalg.hpp"

namespace fide {
namespace {

template <class T>
T constant_of(const Expression& e, const char* what);

template <>
Real constant_of<Real>(const Expression& e, const char*) {
  if (auto r = e.rational_value()) return to_real(*r);
  return e.evaluate(Real(0));
}

template <>
Rational constant_of<Rational>(const Expression& e, const char* what) {
  if (auto r = e.rational_value()) return *r;
  throw Error(ErrorCode::InvalidArgument, std::string("exact arithmetic needs a rational ") + what);
}

template <class T>
OpMatrix<T> grid_of(const KernelGrid& g);

template <>
OpMatrix<Real> grid_of<Real>(const KernelGrid& g) {
  return g.real;
}

template <>
OpMatrix<Rational> grid_of<Rational>(const KernelGrid& g) {
  if (!g.exact) throw Error(ErrorCode::InvalidArgument, "exact arithmetic needs a polynomial kernel");
  return *g.exact;
}

Real norm_inf(const std::vector<Real>& v) {
  Real r = 0;
  for (const Real& x : v)
    if (abs(x) > r) r = abs(x);
  return r;
}

}  // namespace

const char* to_string(SolveStatus s) noexcept {
  return s == SolveStatus::Converged ? "CONVERGED" : "MAX_ITERATIONS";
}

template <>
LegVec<Real> project_source<Real>(const SourceSpec& source, int N) {
  if (source.terms) {
    LegVec<Real> f(static_cast<std::size_t>(N) + 1);
    for (const PowerTerm& term : *source.terms) {
      LegVec<Real> p = fractional_power_projection<Real>(term.exponent, N);
      Real c = term.coefficient_value();
      for (std::size_t k = 0; k < f.size(); ++k) f[k] += c * p[k];
    }
    return f;
  }
  if (!source.pointwise) throw Error(ErrorCode::ValidationError, "source term is not defined");
  // f stays in the Legendre basis, so base precision is enough here
  WorkingDigitsScope base(0);
  return project_function(source.pointwise, N);
}

template <>
LegVec<Rational> project_source<Rational>(const SourceSpec& source, int N) {
  if (!source.terms) throw Error(ErrorCode::InvalidArgument, "exact arithmetic needs a closed-form source");
  LegVec<Rational> f(static_cast<std::size_t>(N) + 1);
  for (const PowerTerm& term : *source.terms) {
    auto c = term.exact_coefficient();
    if (!c) throw Error(ErrorCode::InvalidArgument, "exact arithmetic needs rational source coefficients");
    LegVec<Rational> p = fractional_power_projection<Rational>(term.exponent, N);
    for (std::size_t k = 0; k < f.size(); ++k) f[k] += *c * p[k];
  }
  return f;
}

template <class T>
TauSystem<T>::TauSystem(const ProblemSpec& problem, int N) : problem_(&problem), N_(N) {
  problem.validate();
  if (N < problem.alpha.m()) {
    throw Error(ErrorCode::DimensionMismatch, "N = " + std::to_string(N) + " is below m = " +
                                                  std::to_string(problem.alpha.m()));
  }
  grid_ = resolve_kernel(problem.kernel);
  policy_ = TruncationPolicy::make(N, grid_.degree, problem.q);
  H_ = build_H<T>(problem.alpha, N, N + 1);
  K_ = grid_of<T>(grid_);
  phi_ = phi_matrix<T>(N + 1);
  f_ = project_source<T>(problem.source, N);
  lambda_ = constant_of<T>(problem.lambda, "lambda");
  for (const Expression& d : problem.init_values) d_.push_back(constant_of<T>(d, "initial value"));
}

template <class T>
Applied<T> TauSystem<T>::assemble_residual(const LegVec<T>& y) const {
  if (y.size() != unknowns()) throw Error(ErrorCode::DimensionMismatch, "residual: wrong coefficient count");
  const int W = policy_.working_dim;
  MonoVec<T> d = to_mono(apply_H(y, H_), W);
  Applied<T> fred = fredholm_term(y, K_, problem_->q, lambda_, W);
  MonoVec<T> f = to_mono(f_, W);
  Applied<T> r;
  r.truncation_loss = fred.truncation_loss;
  r.value = MonoVec<T>(static_cast<std::size_t>(W));
  for (std::size_t i = 0; i < r.value.size(); ++i) r.value[i] = d[i] - fred.value[i] - f[i];
  return r;
}

template <class T>
LegVec<T> TauSystem<T>::residual_legendre(const LegVec<T>& y, bool* truncation_loss) const {
  if (y.size() != unknowns()) throw Error(ErrorCode::DimensionMismatch, "residual: wrong coefficient count");
  LegVec<T> d = apply_H(y, H_);
  Applied<T> fred = fredholm_term(y, K_, problem_->q, lambda_, policy_.working_dim);
  if (truncation_loss) *truncation_loss = fred.truncation_loss;
  LegVec<T> fl = to_leg(fred.value, N_);
  LegVec<T> r(unknowns());
  for (std::size_t k = 0; k < r.size(); ++k) r[k] = d[k] - fl[k] - f_[k];
  return r;
}

template <class T>
std::vector<T> TauSystem<T>::residual(const LegVec<T>& y, bool* truncation_loss) const {
  LegVec<T> r = residual_legendre(y, truncation_loss);
  const int m = this->m();
  std::vector<T> out(r.coeffs().begin(), r.coeffs().begin() + (N_ - m + 1));
  MonoVec<T> c = to_mono(y, N_ + 1);
  for (int i = 0; i < m; ++i) {
    out.push_back(from_rational<T>(factorial(i)) * c[static_cast<std::size_t>(i)] - d_[static_cast<std::size_t>(i)]);
  }
  return out;
}

template <class T>
OpMatrix<T> TauSystem<T>::jacobian(const LegVec<T>& y) const {
  const std::size_t n = unknowns();
  const int m = this->m();
  const auto proj_rows = static_cast<std::size_t>(N_ - m + 1);
  OpMatrix<T> fj = fredholm_jacobian(y, K_, problem_->q, lambda_, policy_.working_dim);
  OpMatrix<T> J(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<T> row(fj.cols());
    for (std::size_t c = 0; c < fj.cols(); ++c) row[c] = fj(j, c);
    LegVec<T> fl = to_leg(MonoVec<T>(std::move(row)), N_);
    for (std::size_t r = 0; r < proj_rows; ++r) J(r, j) = H_.entries(j, r) - fl[r];
    for (int i = 0; i < m; ++i) {
      J(proj_rows + static_cast<std::size_t>(i), j) =
          from_rational<T>(factorial(i)) * phi_(j, static_cast<std::size_t>(i));
    }
  }
  return J;
}

template <class T>
OpMatrix<T> TauSystem<T>::finite_difference_jacobian(const LegVec<T>& y) const {
  const std::size_t n = unknowns();
  OpMatrix<T> J(n, n);
  Integer scale = 1;
  for (int k = 0; k < working_digits() / 3; ++k) scale *= 10;
  const T h = from_rational<T>(Rational(Integer(1), scale));
  for (std::size_t j = 0; j < n; ++j) {
    LegVec<T> yp = y, ym = y;
    yp[j] += h;
    ym[j] -= h;
    std::vector<T> fp = residual(yp), fm = residual(ym);
    for (std::size_t r = 0; r < n; ++r) J(r, j) = (fp[r] - fm[r]) / (2 * h);
  }
  return J;
}

template <class T>
LegVec<T> TauSystem<T>::linearized_guess() const {
  // y^q is replaced by its tangent at y_init = sum d_i x^i/i!, so the guess is
  // y_init + J(y_init)^(-1) (-F(y_init)).
  const std::size_t n = unknowns();
  const int m = this->m();
  MonoVec<T> init(n);
  for (int i = 0; i < m; ++i) init[static_cast<std::size_t>(i)] = d_[static_cast<std::size_t>(i)] / from_rational<T>(factorial(i));
  LegVec<T> y = to_leg(init, N_);
  std::vector<T> b = residual(y);
  for (T& v : b) v = -v;
  try {
    std::vector<T> step = detail::LuFactor<T>(jacobian(y)).solve(b);
    for (std::size_t j = 0; j < n; ++j) y[j] += step[j];
    return y;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SingularJacobian) throw;
    return LegVec<T>(n);
  }
}

template <class T>
Applied<T> assemble_residual(const LegVec<T>& y, const ProblemSpec& problem, int N) {
  return TauSystem<T>(problem, N).assemble_residual(y);
}

template class TauSystem<Real>;
template class TauSystem<Rational>;
template Applied<Real> assemble_residual(const LegVec<Real>&, const ProblemSpec&, int);
template Applied<Rational> assemble_residual(const LegVec<Rational>&, const ProblemSpec&, int);

SolutionReport newton_solve(const TauSystem<Real>& system, const LegVec<Real>& y0, const NewtonOptions& options) {
  if (y0.size() != system.unknowns()) throw Error(ErrorCode::DimensionMismatch, "initial guess has wrong length");
  const Real tol = options.tol ? *options.tol : ten_to_minus(precision() - 15);
  if (!(tol > 0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
  const Real min_damping = Real(1) / Real(1 << 20);

  SolutionReport report;
  report.tol = tol;
  bool loss = false;
  LegVec<Real> y = y0;
  std::vector<Real> F = system.residual(y, &loss);
  Real r = norm_inf(F);
  report.flags.truncation_loss |= loss;
  report.newton_trace.push_back(NewtonStep{0, r, Real(0), Real(0)});

  for (int it = 1; r > tol && it <= options.max_iterations; ++it) {
    OpMatrix<Real> J = options.jacobian == JacobianMode::Analytic ? system.jacobian(y)
                                                                   : system.finite_difference_jacobian(y);
    std::vector<Real> rhs(F.size());
    for (std::size_t i = 0; i < F.size(); ++i) rhs[i] = -F[i];
    std::vector<Real> s = detail::LuFactor<Real>(std::move(J)).solve(rhs);
    const Real s_norm = norm_inf(s);
    Real t = 1;
    LegVec<Real> y_new;
    std::vector<Real> F_new;
    Real r_new;
    for (;;) {
      y_new = y;
      for (std::size_t i = 0; i < s.size(); ++i) y_new[i] += t * s[i];
      F_new = system.residual(y_new, &loss);
      r_new = norm_inf(F_new);
      if (r_new <= (1 - Real("1e-4") * t) * r || t <= min_damping) break;
      t /= 2;
    }
    report.flags.truncation_loss |= loss;
    y = std::move(y_new);
    F = std::move(F_new);
    r = r_new;
    report.newton_trace.push_back(NewtonStep{it, r, t * s_norm, t});
  }

  report.status = r <= tol ? SolveStatus::Converged : SolveStatus::MaxIterations;
  report.residual_norm = r;
  report.y_leg = y;
  report.y_mono = to_mono(y, system.N() + 1);
  report.tau_residual_legendre = system.residual_legendre(y).coeffs();
  report.N = system.N();
  report.precision = precision();
  report.kernel_degree = system.kernel_grid().degree;
  report.kernel_truncation_bound = system.kernel_grid().truncation_bound;
  report.working_dim = system.policy().working_dim;
  report.problem = system.problem().name;
  report.alpha = format_rational(system.problem().alpha.alpha());
  if (report.flags.truncation_loss) report.flags.messages.push_back("TRUNCATION_LOSS");
  if (report.status == SolveStatus::MaxIterations) report.flags.messages.push_back("MAX_ITERATIONS");
  return report;
}

int conversion_guard_digits(int q, int N) {
  return static_cast<int>(std::ceil(0.766 * q * std::max(N, 0))) + 5;
}

SolutionReport solve(const ProblemSpec& problem, int N, const SolveOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  SolutionReport report;
  {
    WorkingDigitsScope scope(conversion_guard_digits(problem.q, N));
    TauSystem<Real> system(problem, N);
    LegVec<Real> y0 = options.initial_guess ? *options.initial_guess : system.linearized_guess();
    report = newton_solve(system, y0, options.newton);
  }
  if (options.compute_errors && problem.exact) {
    try {
      report.errors_vs_exact = error_norms(report.y_leg, *problem.exact, options.error_grid);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NonConvergedQuadrature) throw;
      report.flags.quadrature_warning = true;
      report.flags.messages.push_back(std::string("NON_CONVERGED_QUADRATURE: ") + e.what());
    }
  }
  report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace fide
