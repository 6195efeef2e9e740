// Drives the shared library through its C header only.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "fide/fide.h"

namespace {

std::string take(char* s) {
  std::string r = s ? s : "";
  fide_string_free(s);
  return r;
}

double num(char* s) { return std::strtod(take(s).c_str(), nullptr); }

fide_problem* bundled(const char* name) {
  fide_problem* p = nullptr;
  REQUIRE(fide_problem_bundled(name, &p) == FIDE_OK);
  REQUIRE(p != nullptr);
  return p;
}

}  // namespace

TEST_CASE("status names and precision") {
  CHECK(std::string(fide_status_name(FIDE_OK)) == "OK");
  CHECK(std::string(fide_status_name(FIDE_TRUNCATION_LOSS)) == "TRUNCATION_LOSS");
  CHECK(fide_set_precision(10) == FIDE_INVALID_ARGUMENT);
  CHECK(std::string(fide_last_error()).size() > 0);
  CHECK(fide_set_precision(50) == FIDE_OK);
  CHECK(fide_get_precision() == 50);
}

TEST_CASE("bundled problem enumeration") {
  REQUIRE(fide_bundled_count() == 4);
  for (size_t i = 0; i < fide_bundled_count(); ++i) {
    fide_problem* p = bundled(fide_bundled_name(i));
    char* name = nullptr;
    REQUIRE(fide_problem_name(p, &name) == FIDE_OK);
    CHECK(take(name) == fide_bundled_name(i));
    fide_problem_free(p);
  }
  CHECK(fide_bundled_name(99) == nullptr);
  fide_problem* p = nullptr;
  CHECK(fide_problem_bundled("example9", &p) != FIDE_OK);
  CHECK(p == nullptr);
}

TEST_CASE("null arguments are rejected") {
  fide_problem* p = nullptr;
  CHECK(fide_problem_bundled(nullptr, &p) == FIDE_INVALID_ARGUMENT);
  CHECK(fide_problem_from_text("", nullptr) == FIDE_INVALID_ARGUMENT);
  CHECK(fide_solve(nullptr, nullptr, nullptr) == FIDE_INVALID_ARGUMENT);
  CHECK(fide_solution_size(nullptr) == 0);
  CHECK(fide_solution_iterations(nullptr) == -1);
  fide_problem_free(nullptr);
  fide_solution_free(nullptr);
}

TEST_CASE("parse errors surface as PARSE_ERROR with a message") {
  fide_problem* p = nullptr;
  CHECK(fide_problem_from_text("[problem]\nalpha = 1/2\nq = \n", &p) != FIDE_OK);
  CHECK(p == nullptr);
  CHECK(std::string(fide_last_error()).size() > 0);
  CHECK(fide_problem_from_text("[problem]\nalpha = 1\nq = 1\n[kernel]\nk = x*(t\n[source]\nf = x\n[initial]\nd0 = 0\n", &p) == FIDE_PARSE_ERROR);
  CHECK(fide_problem_from_file("/nonexistent/dir/x.prob", &p) == FIDE_IO_ERROR);
}

TEST_CASE("example1 through the C API") {
  fide_problem* p = bundled("example1");
  char* alpha = nullptr;
  REQUIRE(fide_problem_alpha(p, &alpha) == FIDE_OK);
  CHECK(take(alpha) == "1/2");
  REQUIRE(fide_problem_has_exact(p) == 1);
  char* ex = nullptr;
  REQUIRE(fide_problem_eval_exact(p, "0.25", &ex) == FIDE_OK);
  CHECK(num(ex) == doctest::Approx(0.0625 - 0.25).epsilon(1e-15));

  fide_solve_options o;
  fide_solve_options_init(&o);
  o.N = 2;
  fide_solution* s = nullptr;
  REQUIRE(fide_solve(p, &o, &s) == FIDE_OK);
  CHECK(fide_solution_status(s) == FIDE_OK);
  REQUIRE(fide_solution_size(s) == 3);
  const double expected[3] = {-1.0 / 6.0, 0.0, 1.0 / 6.0};
  for (size_t i = 0; i < 3; ++i) {
    char* c = nullptr;
    REQUIRE(fide_solution_coefficient(s, i, &c) == FIDE_OK);
    CHECK(std::fabs(num(c) - expected[i]) < 1e-15);
  }
  char* c = nullptr;
  CHECK(fide_solution_coefficient(s, 3, &c) == FIDE_DIMENSION_MISMATCH);
  char* y = nullptr;
  REQUIRE(fide_solution_eval(s, "0.5", &y) == FIDE_OK);
  CHECK(std::fabs(num(y) + 0.25) < 1e-15);
  CHECK(fide_solution_iterations(s) >= 1);

  char* json = nullptr;
  REQUIRE(fide_solution_report_json(s, 0, &json) == FIDE_OK);
  const std::string j = take(json);
  CHECK(j.find("\"status\"") != std::string::npos);
  CHECK(j.find("runtime") == std::string::npos);

  char* csv = nullptr;
  REQUIRE(fide_solution_table_csv(s, 11, &csv) == FIDE_OK);
  const std::string t = take(csv);
  CHECK(t.rfind("x,y_N,y_exact,abs_error\n", 0) == 0);
  CHECK(std::count(t.begin(), t.end(), '\n') == 12);

  char* r = nullptr;
  REQUIRE(fide_solution_integral_residual(s, 64, &r) == FIDE_OK);
  CHECK(num(r) < 1e-30);
  fide_solution_free(s);
  fide_problem_free(p);
}

TEST_CASE("iteration cap still returns the iterate") {
  fide_problem* p = bundled("example1");
  fide_solve_options o;
  fide_solve_options_init(&o);
  o.N = 4;
  o.max_iterations = 1;
  o.compute_errors = 0;
  fide_solution* s = nullptr;
  CHECK(fide_solve(p, &o, &s) == FIDE_MAX_ITERATIONS);
  REQUIRE(s != nullptr);
  CHECK(fide_solution_status(s) == FIDE_MAX_ITERATIONS);
  CHECK(fide_solution_size(s) == 5);
  fide_solution_free(s);
  fide_problem_free(p);
}

TEST_CASE("alpha override and sweep") {
  fide_problem* p = bundled("example3");
  CHECK(fide_problem_set_alpha(p, "0") == FIDE_VALIDATION_ERROR);
  CHECK(fide_problem_set_alpha(p, "abc") != FIDE_OK);
  REQUIRE(fide_problem_set_alpha(p, "1") == FIDE_OK);
  fide_solve_options o;
  fide_solve_options_init(&o);
  o.N = 1;
  fide_solution* s = nullptr;
  REQUIRE(fide_solve(p, &o, &s) == FIDE_OK);
  char* c0 = nullptr;
  char* c1 = nullptr;
  REQUIRE(fide_solution_coefficient(s, 0, &c0) == FIDE_OK);
  REQUIRE(fide_solution_coefficient(s, 1, &c1) == FIDE_OK);
  CHECK(std::fabs(num(c0) - 0.5) < 1e-15);
  CHECK(std::fabs(num(c1) - 0.5) < 1e-15);
  fide_solution_free(s);

  const int Ns[] = {2, 4};
  char* out = nullptr;
  REQUIRE(fide_sweep(p, Ns, 2, "INTEGRAL_RESIDUAL", 0, &o, FIDE_FORMAT_CSV, 0, &out) == FIDE_OK);
  const std::string csv = take(out);
  CHECK(csv.rfind("N,INTEGRAL_RESIDUAL,status,iterations\n", 0) == 0);
  CHECK(fide_sweep(p, Ns, 2, "BOGUS", 0, &o, FIDE_FORMAT_CSV, 0, &out) == FIDE_INVALID_ARGUMENT);
  const int unsorted[] = {4, 2};
  CHECK(fide_sweep(p, unsorted, 2, "INTEGRAL_RESIDUAL", 0, &o, FIDE_FORMAT_JSON, 0, &out) == FIDE_INVALID_ARGUMENT);
  fide_problem_free(p);
}

TEST_CASE("solutions outlive their problem handle") {
  fide_problem* p = bundled("example2");
  fide_solve_options o;
  fide_solve_options_init(&o);
  o.N = 2;
  fide_solution* s = nullptr;
  REQUIRE(fide_solve(p, &o, &s) == FIDE_OK);
  fide_problem_free(p);
  char* csv = nullptr;
  REQUIRE(fide_solution_table_csv(s, 3, &csv) == FIDE_OK);
  CHECK(take(csv).size() > 0);
  fide_solution_free(s);
}
