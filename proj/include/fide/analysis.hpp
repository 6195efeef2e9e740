#pragma once

// Error norms, the Sobolev inequality check, the equivalent integral-equation
// residual, manufactured sources and convergence sweeps.

#include <optional>
#include <string>
#include <vector>

#include "fide/problem.hpp"
#include "fide/tausolver.hpp"

namespace fide {

/// Legendre coefficients of y'.
template <class T>
LegVec<T> legendre_derivative(const LegVec<T>& y);

/// L2, H1 (and requested |.|_{H^{k;N}} seminorms) of y_N - y_exact by
/// Gauss-Legendre doubling (tanh-sinh fallback); L-infinity by sampling
/// `grid` points and golden-section refinement at the argmax.
/// Throws NON_CONVERGED_QUADRATURE.
ErrorReport error_norms(const LegVec<Real>& y, const ExactSolution& exact, int grid = 1025,
                        const std::vector<int>& seminorm_orders = {});

/// Exact path for polynomial data: squared norms are rational.
ErrorReport error_norms(const LegVec<Rational>& y, const MonoVec<Rational>& exact, int grid = 1025);

struct SobolevResult {
  Real lhs;
  Real rhs;
  bool holds = false;
};

/// sup|e| <= sqrt(3) ||e||_{L2}^{1/2} ||e||_{H1}^{1/2} on (0,1).
SobolevResult sobolev_check(const MonoVec<Real>& e);
SobolevResult sobolev_check(const MonoVec<Rational>& e);

/// max over x_i = i/grid of |y_N - sum d_k x^k/k! - J^alpha f - lambda J^alpha[\int k y_N^q]|.
Real integral_equation_residual(const LegVec<Real>& y, const ProblemSpec& problem, int grid = 64);

/// Pointwise f = D^alpha y - lambda \int_0^1 k(x,t) y(t)^q dt with the Caputo
/// derivative and the t-integral done by quadrature. Values are memoized.
SourceSpec manufacture_source(const ExactSolution& exact, const ProblemSpec& problem);

/// ||f - p_N f||_{L2}.
Real projection_error_l2(const RealFunction& f, int N);

/// max over an n-point uniform grid of |a(x) - b(x)|.
Real max_difference(const LegVec<Real>& a, const LegVec<Real>& b, int grid = 1025);

enum class SweepMetric { MaxError, IntegralResidual, SelfReference };

const char* to_string(SweepMetric m) noexcept;
std::optional<SweepMetric> parse_metric(const std::string& name);

struct SweepRow {
  int N = 0;
  std::optional<Real> value;
  std::string status;
  int iterations = 0;
  double runtime_seconds = 0;
};

struct DecayFit {
  /// "exponential-like" or "algebraic-like"
  std::string kind;
  /// -slope of log(error) against N (exponential) or log N (algebraic).
  Real rate;
  Real correlation_linear;
  Real correlation_log;
};

struct ConvergenceReport {
  SweepMetric metric = SweepMetric::MaxError;
  std::vector<SweepRow> rows;
  std::optional<DecayFit> fit;
  int reference_N = 0;
};

struct SweepOptions {
  SolveOptions solve;
  int reference_N = 64;
  int residual_grid = 64;
};

/// One solve per N; per-row failures are recorded and the sweep continues.
ConvergenceReport convergence_sweep(const ProblemSpec& problem, std::vector<int> Ns, SweepMetric metric,
                                    const SweepOptions& options = {});

std::optional<DecayFit> fit_decay(const std::vector<std::pair<int, Real>>& points);

}  // namespace fide
