#ifndef FIDE_FIDE_H
#define FIDE_FIDE_H

/* C interface to the fide solver. All reals cross the boundary as decimal
 * strings; strings returned through char** are owned by the caller and
 * released with fide_string_free. Functions return FIDE_OK or an error code;
 * fide_last_error() describes the most recent failure on the calling thread. */

#include <stddef.h>

#if defined(_WIN32)
#define FIDE_API __declspec(dllexport)
#else
#define FIDE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fide_status {
  FIDE_OK = 0,
  FIDE_PARSE_ERROR,
  FIDE_VALIDATION_ERROR,
  FIDE_NON_CONVERGED_QUADRATURE,
  FIDE_MAX_ITERATIONS,
  FIDE_SINGULAR_JACOBIAN,
  FIDE_DIMENSION_MISMATCH,
  FIDE_TRUNCATION_LOSS,
  FIDE_INVALID_ARGUMENT,
  FIDE_IO_ERROR,
  FIDE_INTERNAL
} fide_status;

typedef struct fide_problem fide_problem;
typedef struct fide_solution fide_solution;

FIDE_API const char* fide_status_name(fide_status status);
FIDE_API const char* fide_last_error(void);
FIDE_API void fide_string_free(char* s);

/* Requested decimal digits, >= 30. Affects values created afterwards. */
FIDE_API fide_status fide_set_precision(int digits);
FIDE_API int fide_get_precision(void);

FIDE_API fide_status fide_problem_from_file(const char* path, fide_problem** out);
FIDE_API fide_status fide_problem_from_text(const char* text, fide_problem** out);
/* "example1" .. "example4" */
FIDE_API fide_status fide_problem_bundled(const char* name, fide_problem** out);
FIDE_API size_t fide_bundled_count(void);
FIDE_API const char* fide_bundled_name(size_t index);
/* alpha as a rational, e.g. "3/4"; a manufactured source is regenerated. */
FIDE_API fide_status fide_problem_set_alpha(fide_problem* problem, const char* alpha);
FIDE_API fide_status fide_problem_name(const fide_problem* problem, char** out);
FIDE_API fide_status fide_problem_alpha(const fide_problem* problem, char** out);
FIDE_API int fide_problem_has_exact(const fide_problem* problem);
FIDE_API fide_status fide_problem_eval_exact(const fide_problem* problem, const char* x, char** out);
FIDE_API void fide_problem_free(fide_problem* problem);

typedef struct fide_solve_options {
  int N;
  /* NULL for the default 10^(-p+15). */
  const char* tol;
  int max_iterations;
  int finite_difference_jacobian;
  int compute_errors;
} fide_solve_options;

FIDE_API void fide_solve_options_init(fide_solve_options* options);

/* On FIDE_MAX_ITERATIONS *out still receives the last iterate. */
FIDE_API fide_status fide_solve(const fide_problem* problem, const fide_solve_options* options,
                                fide_solution** out);
FIDE_API fide_status fide_solution_status(const fide_solution* solution);
FIDE_API int fide_solution_iterations(const fide_solution* solution);
FIDE_API size_t fide_solution_size(const fide_solution* solution);
/* Legendre coefficient i. */
FIDE_API fide_status fide_solution_coefficient(const fide_solution* solution, size_t i, char** out);
FIDE_API fide_status fide_solution_eval(const fide_solution* solution, const char* x, char** out);
FIDE_API fide_status fide_solution_report_json(const fide_solution* solution, int include_runtime, char** out);
FIDE_API fide_status fide_solution_table_csv(const fide_solution* solution, int points, char** out);
FIDE_API fide_status fide_solution_integral_residual(const fide_solution* solution, int grid, char** out);
FIDE_API void fide_solution_free(fide_solution* solution);

typedef enum fide_format { FIDE_FORMAT_CSV = 0, FIDE_FORMAT_JSON = 1 } fide_format;

/* metric: "MAX_ERROR", "INTEGRAL_RESIDUAL" or "SELF_REFERENCE". Ns ascending. */
FIDE_API fide_status fide_sweep(const fide_problem* problem, const int* Ns, size_t count, const char* metric,
                                int reference_N, const fide_solve_options* options, fide_format format,
                                int include_runtime, char** out);

/* JSON array of {name, passed, detail}; *all_passed is 1 when every suite passed. */
FIDE_API fide_status fide_verify(unsigned long long seed, char** out_json, int* all_passed);

#ifdef __cplusplus
}
#endif

#endif
