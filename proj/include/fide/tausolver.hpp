#pragma once

// The Tau system: N-m+1 Legendre projections of the residual plus m
// initial-condition rows, solved by damped Newton iteration.

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "fide/fracops.hpp"
#include "fide/nonlinear.hpp"
#include "fide/opmat.hpp"
#include "fide/problem.hpp"

namespace fide {

enum class JacobianMode { Analytic, FiniteDifference };

/// Source coefficients p_N f: closed-form terms through the fractional-power
/// projection, everything else by quadrature (Real only).
template <class T>
LegVec<T> project_source(const SourceSpec& source, int N);

template <class T>
class TauSystem {
 public:
  TauSystem(const ProblemSpec& problem, int N);

  int N() const noexcept { return N_; }
  int m() const noexcept { return problem_->alpha.m(); }
  const TruncationPolicy& policy() const noexcept { return policy_; }
  std::size_t equations() const noexcept { return static_cast<std::size_t>(N_) + 1; }
  std::size_t unknowns() const noexcept { return static_cast<std::size_t>(N_) + 1; }
  const ProblemSpec& problem() const noexcept { return *problem_; }
  const HMatrix<T>& H() const noexcept { return H_; }
  const OpMatrix<T>& K() const noexcept { return K_; }
  const LegVec<T>& source() const noexcept { return f_; }
  const KernelGrid& kernel_grid() const noexcept { return grid_; }

  /// Monomial coefficients of R(x) = D^alpha_N y - lambda \int k y^q - p_N f
  /// at the working dimension.
  Applied<T> assemble_residual(const LegVec<T>& y) const;
  /// All N+1 Legendre modes of R.
  LegVec<T> residual_legendre(const LegVec<T>& y, bool* truncation_loss = nullptr) const;
  /// Modes 0..N-m of R followed by y^(i)(0) - d_i, i < m.
  std::vector<T> residual(const LegVec<T>& y, bool* truncation_loss = nullptr) const;
  OpMatrix<T> jacobian(const LegVec<T>& y) const;
  OpMatrix<T> finite_difference_jacobian(const LegVec<T>& y) const;

  /// Solves the system with y^q linearized about y_init = sum d_i x^i/i!.
  LegVec<T> linearized_guess() const;

 private:
  const ProblemSpec* problem_;
  int N_;
  TruncationPolicy policy_;
  KernelGrid grid_;
  HMatrix<T> H_;
  OpMatrix<T> K_;
  OpMatrix<T> phi_;
  LegVec<T> f_;
  T lambda_;
  std::vector<T> d_;
};

template <class T>
Applied<T> assemble_residual(const LegVec<T>& y, const ProblemSpec& problem, int N);

struct NewtonStep {
  int iteration = 0;
  Real residual_norm;
  Real step_norm;
  Real damping;
};

struct NewtonOptions {
  /// Defaults to 10^(-p+15).
  std::optional<Real> tol;
  int max_iterations = 60;
  JacobianMode jacobian = JacobianMode::Analytic;
};

enum class SolveStatus { Converged, MaxIterations };

const char* to_string(SolveStatus s) noexcept;

struct ErrorReport {
  Real l2;
  Real linf;
  Real h1;
  /// (k, |y_N - y|_{H^{k;N}})
  std::vector<std::pair<int, Real>> seminorms;
  Real argmax;
};

struct SolutionFlags {
  bool truncation_loss = false;
  bool quadrature_warning = false;
  std::vector<std::string> messages;
};

struct SolutionReport {
  std::string problem;
  std::string alpha;
  int N = 0;
  int precision = 0;
  int kernel_degree = 0;
  int working_dim = 0;
  Real kernel_truncation_bound;
  Real tol;
  SolveStatus status = SolveStatus::Converged;
  LegVec<Real> y_leg;
  MonoVec<Real> y_mono;
  std::vector<NewtonStep> newton_trace;
  std::vector<Real> tau_residual_legendre;
  Real residual_norm;
  std::optional<ErrorReport> errors_vs_exact;
  SolutionFlags flags;
  double runtime_seconds = 0;
};

SolutionReport newton_solve(const TauSystem<Real>& system, const LegVec<Real>& y0,
                            const NewtonOptions& options = {});

struct SolveOptions {
  NewtonOptions newton;
  std::optional<LegVec<Real>> initial_guess;
  bool compute_errors = true;
  int error_grid = 1025;
};

/// Converting a degree-n polynomial between the Legendre and monomial bases
/// costs about n log10(3 + 2 sqrt 2) digits; y^q has degree qN. solve() runs
/// under a WorkingDigitsScope of this size.
int conversion_guard_digits(int q, int N);

/// build_system + newton_solve; fills errors_vs_exact when an exact
/// solution is known.
SolutionReport solve(const ProblemSpec& problem, int N, const SolveOptions& options = {});

}  // namespace fide
