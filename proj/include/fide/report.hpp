#pragma once

// JSON and CSV emission. Reals are written as decimal strings with the
// requested number of significant digits; runtimes only on request so that
// output files are reproducible.

#include <string>
#include <string_view>

#include "fide/analysis.hpp"
#include "fide/tausolver.hpp"

namespace fide {

std::string report_to_json(const SolutionReport& report, bool include_runtime = false);
/// Inverse of report_to_json (runtime is read if present).
SolutionReport report_from_json(std::string_view json);

/// Header x,y_N,y_exact,abs_error; exact columns are empty without an
/// exact solution.
std::string solution_table_csv(const SolutionReport& report, const ProblemSpec& problem, int points = 11);

std::string sweep_to_json(const ConvergenceReport& report, bool include_runtime = false);
std::string sweep_to_csv(const ConvergenceReport& report, bool include_runtime = false);

}  // namespace fide
