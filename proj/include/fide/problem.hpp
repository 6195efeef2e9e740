#pragma once

// Problem data: order, lambda, power, kernel, source, initial values and an
// optional exact solution.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fide/expr.hpp"
#include "fide/fracops.hpp"
#include "fide/nonlinear.hpp"

namespace fide {

/// Closed-form terms (projected exactly) and/or a pointwise function.
struct SourceSpec {
  std::optional<std::vector<PowerTerm>> terms;
  RealFunction pointwise;
  std::optional<Expression> expression;
  /// Regenerated from the exact solution by manufacture_source.
  bool manufactured = false;

  static SourceSpec from_expression(const Expression& e);
  static SourceSpec from_function(RealFunction f);

  Real evaluate(const Real& x) const;
};

struct ExactSolution {
  Expression expression;
  /// derivatives[k] = d^k/dx^k, k = 0..kMaxDerivative.
  std::vector<Expression> derivatives;
  std::optional<MonoVec<Rational>> polynomial;

  static constexpr int kMaxDerivative = 4;
  static ExactSolution from_expression(const Expression& e);

  Real value(const Real& x) const;
  Real derivative(const Real& x, int k) const;
};

struct ProblemSpec {
  std::string name;
  FracOrder alpha{Rational(1)};
  Expression lambda = Expression::constant(1);
  int q = 1;
  KernelSpec kernel;
  SourceSpec source;
  /// d_0 .. d_(m-1), constant expressions.
  std::vector<Expression> init_values;
  std::optional<ExactSolution> exact;

  /// VALIDATION_ERROR on inconsistent data (IC count, q < 1, non-constant
  /// lambda or d_i, missing source).
  void validate() const;

  Real lambda_value() const { return lambda.evaluate(Real(0)); }
  Real init_value(int i) const { return init_values.at(static_cast<std::size_t>(i)).evaluate(Real(0)); }
  /// sum_i d_i x^i / i!
  MonoVec<Real> initial_polynomial(int dim) const;
};

}  // namespace fide
