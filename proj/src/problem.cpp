#include "fide/problem.hpp"

#include "fide/error.hpp"

namespace fide {

SourceSpec SourceSpec::from_expression(const Expression& e) {
  if (e.depends_on_t()) throw Error(ErrorCode::ValidationError, "source term may not depend on t");
  SourceSpec s;
  s.expression = e;
  s.terms = e.power_sum();
  s.pointwise = [e](const Real& x) { return e.evaluate(x); };
  return s;
}

SourceSpec SourceSpec::from_function(RealFunction f) {
  SourceSpec s;
  s.pointwise = std::move(f);
  return s;
}

Real SourceSpec::evaluate(const Real& x) const {
  if (!pointwise) throw Error(ErrorCode::ValidationError, "source term is not defined");
  return pointwise(x);
}

ExactSolution ExactSolution::from_expression(const Expression& e) {
  if (e.depends_on_t()) throw Error(ErrorCode::ValidationError, "exact solution may not depend on t");
  ExactSolution s;
  s.expression = e;
  s.derivatives.push_back(e);
  for (int k = 1; k <= kMaxDerivative; ++k) s.derivatives.push_back(s.derivatives.back().derivative_x());
  if (auto grid = e.bivariate_polynomial()) {
    std::vector<Rational> c(grid->rows());
    for (std::size_t i = 0; i < grid->rows(); ++i) c[i] = (*grid)(i, 0);
    s.polynomial = MonoVec<Rational>(std::move(c));
  }
  return s;
}

Real ExactSolution::value(const Real& x) const { return expression.evaluate(x); }

Real ExactSolution::derivative(const Real& x, int k) const {
  if (k < 0 || k > kMaxDerivative)
    throw Error(ErrorCode::InvalidArgument, "derivative order out of range: " + std::to_string(k));
  return derivatives.at(static_cast<std::size_t>(k)).evaluate(x);
}

void ProblemSpec::validate() const {
  auto fail = [this](const std::string& msg) {
    throw Error(ErrorCode::ValidationError, (name.empty() ? std::string() : name + ": ") + msg);
  };
  const int m = alpha.m();
  if (static_cast<int>(init_values.size()) != m) {
    fail("order alpha = " + format_rational(alpha.alpha()) + " needs " + std::to_string(m) +
         " initial value(s), got " + std::to_string(init_values.size()));
  }
  if (q < 1) fail("power q must be a positive integer");
  if (!lambda.is_constant()) fail("lambda must be a constant");
  for (const Expression& d : init_values)
    if (!d.is_constant()) fail("initial values must be constants");
  if (!source.pointwise) fail("no source term");
  if (source.manufactured && !exact) fail("a manufactured source needs an exact solution");
  if (source.terms) {
    for (const PowerTerm& term : *source.terms) {
      if (term.exponent <= Rational(-1, 2)) {
        fail("source exponent " + format_rational(term.exponent) + " is not square integrable");
      }
    }
  }
}

MonoVec<Real> ProblemSpec::initial_polynomial(int dim) const {
  MonoVec<Real> p(static_cast<std::size_t>(dim));
  for (int i = 0; i < static_cast<int>(init_values.size()) && i < dim; ++i)
    p[static_cast<std::size_t>(i)] = init_value(i) / to_real(factorial(i));
  return p;
}

}  // namespace fide
