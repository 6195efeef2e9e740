#pragma once

// Plain-text problem files:
//
//   [problem]   name, alpha, lambda, q
//   [kernel]    k = <expr in x, t>, optional degree = <Taylor degree>
//   [source]    f = <expr in x>   or   manufactured = true
//   [initial]   d0 = ..., d1 = ...
//   [exact]     y = <expr in x>
//
// '#' starts a comment.

#include <string>
#include <string_view>
#include <vector>

#include "fide/problem.hpp"

namespace fide {

/// Throws PARSE_ERROR (with line/column) or VALIDATION_ERROR.
ProblemSpec parse_problem_text(std::string_view text);
ProblemSpec parse_problem_file(const std::string& path);

/// example1 .. example4.
std::vector<std::string> bundled_problem_names();
std::string bundled_problem_text(const std::string& name);
ProblemSpec bundled_problem(const std::string& name);

/// Copy with a different order; a manufactured source is regenerated.
ProblemSpec with_alpha(const ProblemSpec& problem, const Rational& alpha);

}  // namespace fide
