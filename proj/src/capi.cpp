#include "fide/fide.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "fide/analysis.hpp"
#include "fide/problem_file.hpp"
#include "fide/report.hpp"
#include "fide/verify.hpp"
#include "json.hpp"

struct fide_problem {
  fide::ProblemSpec spec;
};

struct fide_solution {
  fide::ProblemSpec problem;
  fide::SolutionReport report;
};

namespace {

thread_local std::string g_last_error;

fide_status status_of(fide::ErrorCode code) {
  switch (code) {
    case fide::ErrorCode::ParseError: return FIDE_PARSE_ERROR;
    case fide::ErrorCode::ValidationError: return FIDE_VALIDATION_ERROR;
    case fide::ErrorCode::NonConvergedQuadrature: return FIDE_NON_CONVERGED_QUADRATURE;
    case fide::ErrorCode::MaxIterations: return FIDE_MAX_ITERATIONS;
    case fide::ErrorCode::SingularJacobian: return FIDE_SINGULAR_JACOBIAN;
    case fide::ErrorCode::DimensionMismatch: return FIDE_DIMENSION_MISMATCH;
    case fide::ErrorCode::TruncationLoss: return FIDE_TRUNCATION_LOSS;
    case fide::ErrorCode::InvalidArgument: return FIDE_INVALID_ARGUMENT;
    case fide::ErrorCode::IoError: return FIDE_IO_ERROR;
    case fide::ErrorCode::Internal: return FIDE_INTERNAL;
  }
  return FIDE_INTERNAL;
}

fide_status fail(fide_status s, std::string message) {
  g_last_error = std::move(message);
  return s;
}

/// Runs f, mapping exceptions to status codes.
template <class F>
fide_status guarded(F&& f) {
  try {
    g_last_error.clear();
    return f();
  } catch (const fide::Error& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(FIDE_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(FIDE_INTERNAL, e.what());
  }
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

fide_status put(char** out, const std::string& s) {
  if (!out) return fail(FIDE_INVALID_ARGUMENT, "null output pointer");
  *out = dup(s);
  return FIDE_OK;
}

#define FIDE_REQUIRE(cond, what) \
  if (!(cond)) return fail(FIDE_INVALID_ARGUMENT, what)

fide::SolveOptions solve_options(const fide_solve_options* o) {
  fide::SolveOptions s;
  if (!o) return s;
  if (o->tol) s.newton.tol = fide::to_real(std::string_view(o->tol));
  if (o->max_iterations > 0) s.newton.max_iterations = o->max_iterations;
  s.newton.jacobian = o->finite_difference_jacobian ? fide::JacobianMode::FiniteDifference : fide::JacobianMode::Analytic;
  s.compute_errors = o->compute_errors != 0;
  return s;
}

fide::Real parse_real(const char* x) {
  if (!x) throw fide::Error(fide::ErrorCode::InvalidArgument, "null number");
  return fide::to_real(std::string_view(x));
}

}  // namespace

extern "C" {

const char* fide_status_name(fide_status status) {
  switch (status) {
    case FIDE_OK: return "OK";
    case FIDE_PARSE_ERROR: return "PARSE_ERROR";
    case FIDE_VALIDATION_ERROR: return "VALIDATION_ERROR";
    case FIDE_NON_CONVERGED_QUADRATURE: return "NON_CONVERGED_QUADRATURE";
    case FIDE_MAX_ITERATIONS: return "MAX_ITERATIONS";
    case FIDE_SINGULAR_JACOBIAN: return "SINGULAR_JACOBIAN";
    case FIDE_DIMENSION_MISMATCH: return "DIMENSION_MISMATCH";
    case FIDE_TRUNCATION_LOSS: return "TRUNCATION_LOSS";
    case FIDE_INVALID_ARGUMENT: return "INVALID_ARGUMENT";
    case FIDE_IO_ERROR: return "IO_ERROR";
    case FIDE_INTERNAL: return "INTERNAL";
  }
  return "UNKNOWN";
}

const char* fide_last_error(void) { return g_last_error.c_str(); }

void fide_string_free(char* s) { std::free(s); }

fide_status fide_set_precision(int digits) {
  return guarded([&] {
    fide::set_precision(digits);
    return FIDE_OK;
  });
}

int fide_get_precision(void) { return fide::precision(); }

fide_status fide_problem_from_file(const char* path, fide_problem** out) {
  FIDE_REQUIRE(path && out, "null argument");
  return guarded([&] {
    *out = new fide_problem{fide::parse_problem_file(path)};
    return FIDE_OK;
  });
}

fide_status fide_problem_from_text(const char* text, fide_problem** out) {
  FIDE_REQUIRE(text && out, "null argument");
  return guarded([&] {
    *out = new fide_problem{fide::parse_problem_text(text)};
    return FIDE_OK;
  });
}

fide_status fide_problem_bundled(const char* name, fide_problem** out) {
  FIDE_REQUIRE(name && out, "null argument");
  return guarded([&] {
    *out = new fide_problem{fide::bundled_problem(name)};
    return FIDE_OK;
  });
}

size_t fide_bundled_count(void) { return fide::bundled_problem_names().size(); }

const char* fide_bundled_name(size_t index) {
  static const std::vector<std::string> names = fide::bundled_problem_names();
  return index < names.size() ? names[index].c_str() : nullptr;
}

fide_status fide_problem_set_alpha(fide_problem* problem, const char* alpha) {
  FIDE_REQUIRE(problem && alpha, "null argument");
  return guarded([&] {
    fide::Rational a = fide::parse_rational(alpha);
    if (a <= 0) return fail(FIDE_VALIDATION_ERROR, "alpha must be positive");
    problem->spec = fide::with_alpha(problem->spec, a);
    return FIDE_OK;
  });
}

fide_status fide_problem_name(const fide_problem* problem, char** out) {
  FIDE_REQUIRE(problem, "null problem");
  return guarded([&] { return put(out, problem->spec.name); });
}

fide_status fide_problem_alpha(const fide_problem* problem, char** out) {
  FIDE_REQUIRE(problem, "null problem");
  return guarded([&] { return put(out, fide::format_rational(problem->spec.alpha.alpha())); });
}

int fide_problem_has_exact(const fide_problem* problem) { return problem && problem->spec.exact ? 1 : 0; }

fide_status fide_problem_eval_exact(const fide_problem* problem, const char* x, char** out) {
  FIDE_REQUIRE(problem, "null problem");
  if (!problem->spec.exact) return fail(FIDE_INVALID_ARGUMENT, "problem has no exact solution");
  return guarded([&] { return put(out, fide::format_sci(problem->spec.exact->value(parse_real(x)))); });
}

void fide_problem_free(fide_problem* problem) { delete problem; }

void fide_solve_options_init(fide_solve_options* options) {
  if (!options) return;
  options->N = 10;
  options->tol = nullptr;
  options->max_iterations = 60;
  options->finite_difference_jacobian = 0;
  options->compute_errors = 1;
}

fide_status fide_solve(const fide_problem* problem, const fide_solve_options* options, fide_solution** out) {
  FIDE_REQUIRE(problem && options && out, "null argument");
  return guarded([&] {
    auto* s = new fide_solution{problem->spec, {}};
    try {
      s->report = fide::solve(s->problem, options->N, solve_options(options));
    } catch (...) {
      delete s;
      throw;
    }
    *out = s;
    if (s->report.status == fide::SolveStatus::MaxIterations) {
      return fail(FIDE_MAX_ITERATIONS, "Newton iteration hit the iteration cap");
    }
    return FIDE_OK;
  });
}

fide_status fide_solution_status(const fide_solution* solution) {
  if (!solution) return FIDE_INVALID_ARGUMENT;
  return solution->report.status == fide::SolveStatus::Converged ? FIDE_OK : FIDE_MAX_ITERATIONS;
}

int fide_solution_iterations(const fide_solution* solution) {
  return solution ? static_cast<int>(solution->report.newton_trace.size()) - 1 : -1;
}

size_t fide_solution_size(const fide_solution* solution) { return solution ? solution->report.y_leg.size() : 0; }

fide_status fide_solution_coefficient(const fide_solution* solution, size_t i, char** out) {
  FIDE_REQUIRE(solution, "null solution");
  if (i >= solution->report.y_leg.size()) return fail(FIDE_DIMENSION_MISMATCH, "coefficient index out of range");
  return guarded([&] { return put(out, fide::format_sci(solution->report.y_leg[i])); });
}

fide_status fide_solution_eval(const fide_solution* solution, const char* x, char** out) {
  FIDE_REQUIRE(solution, "null solution");
  return guarded([&] { return put(out, fide::format_sci(solution->report.y_leg.evaluate(parse_real(x)))); });
}

fide_status fide_solution_report_json(const fide_solution* solution, int include_runtime, char** out) {
  FIDE_REQUIRE(solution, "null solution");
  return guarded([&] { return put(out, fide::report_to_json(solution->report, include_runtime != 0)); });
}

fide_status fide_solution_table_csv(const fide_solution* solution, int points, char** out) {
  FIDE_REQUIRE(solution, "null solution");
  return guarded([&] { return put(out, fide::solution_table_csv(solution->report, solution->problem, points)); });
}

fide_status fide_solution_integral_residual(const fide_solution* solution, int grid, char** out) {
  FIDE_REQUIRE(solution, "null solution");
  return guarded([&] {
    return put(out, fide::format_sci(fide::integral_equation_residual(solution->report.y_leg, solution->problem, grid)));
  });
}

void fide_solution_free(fide_solution* solution) { delete solution; }

fide_status fide_sweep(const fide_problem* problem, const int* Ns, size_t count, const char* metric, int reference_N,
                       const fide_solve_options* options, fide_format format, int include_runtime, char** out) {
  FIDE_REQUIRE(problem && Ns && count > 0 && metric, "null argument");
  return guarded([&] {
    auto m = fide::parse_metric(metric);
    if (!m) return fail(FIDE_INVALID_ARGUMENT, std::string("unknown metric '") + metric + "'");
    fide::SweepOptions so;
    so.solve = solve_options(options);
    if (reference_N > 0) so.reference_N = reference_N;
    fide::ConvergenceReport r = fide::convergence_sweep(problem->spec, std::vector<int>(Ns, Ns + count), *m, so);
    return put(out, format == FIDE_FORMAT_JSON ? fide::sweep_to_json(r, include_runtime != 0)
                                              : fide::sweep_to_csv(r, include_runtime != 0));
  });
}

fide_status fide_verify(unsigned long long seed, char** out_json, int* all_passed) {
  return guarded([&] {
    fide::VerifyOptions o;
    o.seed = seed;
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    bool ok = true;
    for (const fide::VerifyResult& r : fide::run_verify(o)) {
      j.push_back({{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
      ok = ok && r.passed;
    }
    if (all_passed) *all_passed = ok ? 1 : 0;
    return put(out_json, j.dump(2) + "\n");
  });
}

}  // extern "C"
