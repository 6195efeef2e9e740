#pragma once

// Restricted expression language for kernels, sources and exact solutions:
// x, t, pi, rational literals, + - * / ^, and the functions exp, log, sqrt,
// erf, sin, cos and gamma (constant argument only).

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fide/polybasis.hpp"

namespace fide {

enum class ExprOp {
  Number,
  VarX,
  VarT,
  Pi,
  Add,
  Sub,
  Mul,
  Div,
  Neg,
  Pow,
  Exp,
  Log,
  Sqrt,
  Erf,
  Sin,
  Cos,
  Gamma,
};

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  ExprOp op;
  Rational number;  // ExprOp::Number only
  ExprPtr a;
  ExprPtr b;
};

class Expression;

/// c * x^exponent with c a constant expression.
struct PowerTerm {
  std::shared_ptr<const Expression> coefficient;
  Rational exponent;

  Real coefficient_value() const;
  /// Set when the coefficient folds to a rational.
  std::optional<Rational> exact_coefficient() const;
};

class Expression {
 public:
  Expression();  // the constant 0
  explicit Expression(ExprPtr root);
  static Expression constant(const Rational& value);

  /// Throws ParseError; positions are reported relative to (line, column).
  static Expression parse(std::string_view text, int line = 1, int column = 1);

  const ExprPtr& root() const noexcept { return root_; }
  std::string to_string() const;

  Real evaluate(const Real& x, const Real& t) const;
  Real evaluate(const Real& x) const { return evaluate(x, Real(0)); }

  bool depends_on_x() const;
  bool depends_on_t() const;
  bool is_constant() const { return !depends_on_x() && !depends_on_t(); }

  /// Exact value of a constant expression built from rationals with
  /// + - * / and integer powers.
  std::optional<Rational> rational_value() const;

  /// Coefficients K_ij of sum K_ij x^i t^j when the expression is a
  /// polynomial with rational coefficients.
  std::optional<OpMatrix<Rational>> bivariate_polynomial() const;

  /// Terms c_k x^(e_k) with distinct exponents, when the expression is a
  /// finite sum of constant multiples of rational powers of x.
  std::optional<std::vector<PowerTerm>> power_sum() const;

  /// Taylor coefficients about (0,0) truncated at total degree `degree`;
  /// entry (i, j) multiplies x^i t^j. Throws VALIDATION_ERROR if the
  /// expression is not analytic at the origin.
  OpMatrix<Real> taylor(int degree) const;

  /// Symbolic d/dx.
  Expression derivative_x() const;

 private:
  ExprPtr root_;
};

}  // namespace fide
