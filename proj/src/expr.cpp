#include "fide/expr.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>

#include "fide/error.hpp"

namespace fide {
namespace {

using boost::multiprecision::cos;
using boost::multiprecision::erf;
using boost::multiprecision::exp;
using boost::multiprecision::log;
using boost::multiprecision::pow;
using boost::multiprecision::sin;
using boost::multiprecision::sqrt;
using boost::multiprecision::tgamma;

ExprPtr make(ExprOp op, ExprPtr a = nullptr, ExprPtr b = nullptr) {
  return std::make_shared<const ExprNode>(ExprNode{op, Rational(0), std::move(a), std::move(b)});
}

ExprPtr num(const Rational& r) {
  return std::make_shared<const ExprNode>(ExprNode{ExprOp::Number, r, nullptr, nullptr});
}

bool is_number(const ExprPtr& e, const Rational& v) { return e->op == ExprOp::Number && e->number == v; }

// ---------------------------------------------------------------- parsing

class Parser {
 public:
  Parser(std::string_view text, int line, int column) : s_(text), line_(line), column_(column) {}

  ExprPtr run() {
    skip_ws();
    if (pos_ >= s_.size()) fail("empty expression");
    ExprPtr e = parse_sum();
    skip_ws();
    if (pos_ < s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) { fail_at(msg, pos_); }

  [[noreturn]] void fail_at(const std::string& msg, std::size_t at) {
    int col = column_;
    for (std::size_t i = 0; i < at && i < s_.size(); ++i) {
      if ((static_cast<unsigned char>(s_[i]) & 0xC0) != 0x80) ++col;
    }
    throw ParseError(msg, line_, col);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  // '-' or U+2212 (minus sign); returns byte length matched
  std::size_t minus_at(std::size_t p) const {
    if (p < s_.size() && s_[p] == '-') return 1;
    if (s_.substr(p, 3) == "\xE2\x88\x92") return 3;
    return 0;
  }

  ExprPtr parse_sum() {
    ExprPtr lhs = parse_product();
    for (;;) {
      skip_ws();
      if (pos_ < s_.size() && s_[pos_] == '+') {
        ++pos_;
        lhs = make(ExprOp::Add, lhs, parse_product());
      } else if (std::size_t n = minus_at(pos_)) {
        pos_ += n;
        lhs = make(ExprOp::Sub, lhs, parse_product());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr parse_product() {
    ExprPtr lhs = parse_unary();
    for (;;) {
      skip_ws();
      if (pos_ < s_.size() && s_[pos_] == '*') {
        ++pos_;
        lhs = make(ExprOp::Mul, lhs, parse_unary());
      } else if (pos_ < s_.size() && s_[pos_] == '/') {
        ++pos_;
        lhs = make(ExprOp::Div, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr parse_unary() {
    skip_ws();
    if (std::size_t n = minus_at(pos_)) {
      pos_ += n;
      return make(ExprOp::Neg, parse_unary());
    }
    if (pos_ < s_.size() && s_[pos_] == '+') {
      ++pos_;
      return parse_unary();
    }
    return parse_power();
  }

  ExprPtr parse_power() {
    ExprPtr base = parse_primary();
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == '^') {
      ++pos_;
      return make(ExprOp::Pow, base, parse_unary());
    }
    return base;
  }

  ExprPtr parse_primary() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      ExprPtr e = parse_sum();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_identifier();
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= s_.size() || s_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  ExprPtr parse_number() {
    std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_, ++n;
      return n;
    };
    std::size_t n = digits();
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      n += digits();
    }
    if (n == 0) fail_at("malformed number", start);
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      if (digits() == 0) pos_ = save;
    }
    return num(parse_rational(s_.substr(start, pos_ - start)));
  }

  ExprPtr parse_identifier() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    std::string name(s_.substr(start, pos_ - start));
    if (name == "x") return make(ExprOp::VarX);
    if (name == "t") return make(ExprOp::VarT);
    if (name == "pi") return make(ExprOp::Pi);
    static const std::map<std::string, ExprOp> functions{
        {"exp", ExprOp::Exp}, {"log", ExprOp::Log}, {"sqrt", ExprOp::Sqrt}, {"erf", ExprOp::Erf},
        {"sin", ExprOp::Sin}, {"cos", ExprOp::Cos}, {"gamma", ExprOp::Gamma}};
    auto it = functions.find(name);
    if (it == functions.end()) fail_at("unknown identifier '" + name + "'", start);
    skip_ws();
    if (pos_ >= s_.size() || s_[pos_] != '(') fail("expected '(' after " + name);
    ++pos_;
    ExprPtr arg = parse_sum();
    expect(')');
    if (it->second == ExprOp::Gamma && (depends(arg, ExprOp::VarX) || depends(arg, ExprOp::VarT))) {
      fail_at("gamma() takes a constant argument", start);
    }
    return make(it->second, arg);
  }

 public:
  static bool depends(const ExprPtr& e, ExprOp var) {
    if (!e) return false;
    if (e->op == var) return true;
    return depends(e->a, var) || depends(e->b, var);
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
  int line_;
  int column_;
};

// ---------------------------------------------------------------- evaluation

Real eval(const ExprNode& n, const Real& x, const Real& t) {
  switch (n.op) {
    case ExprOp::Number: return to_real(n.number);
    case ExprOp::VarX: return x;
    case ExprOp::VarT: return t;
    case ExprOp::Pi: return pi();
    case ExprOp::Add: return eval(*n.a, x, t) + eval(*n.b, x, t);
    case ExprOp::Sub: return eval(*n.a, x, t) - eval(*n.b, x, t);
    case ExprOp::Mul: return eval(*n.a, x, t) * eval(*n.b, x, t);
    case ExprOp::Div: return eval(*n.a, x, t) / eval(*n.b, x, t);
    case ExprOp::Neg: return -eval(*n.a, x, t);
    case ExprOp::Pow: {
      Real base = eval(*n.a, x, t);
      if (n.b->op == ExprOp::Number && is_integer(n.b->number) &&
          abs(n.b->number) < Rational(1 << 20)) {
        long k = boost::multiprecision::numerator(n.b->number).convert_to<long>();
        return pow(base, Real(k));
      }
      return pow(base, eval(*n.b, x, t));
    }
    case ExprOp::Exp: return exp(eval(*n.a, x, t));
    case ExprOp::Log: return log(eval(*n.a, x, t));
    case ExprOp::Sqrt: return sqrt(eval(*n.a, x, t));
    case ExprOp::Erf: return erf(eval(*n.a, x, t));
    case ExprOp::Sin: return sin(eval(*n.a, x, t));
    case ExprOp::Cos: return cos(eval(*n.a, x, t));
    case ExprOp::Gamma: return tgamma(eval(*n.a, x, t));
  }
  throw Error(ErrorCode::Internal, "bad expression node");
}

std::optional<Rational> exact(const ExprNode& n) {
  switch (n.op) {
    case ExprOp::Number: return n.number;
    case ExprOp::Add:
    case ExprOp::Sub:
    case ExprOp::Mul:
    case ExprOp::Div: {
      auto a = exact(*n.a);
      if (!a) return std::nullopt;
      auto b = exact(*n.b);
      if (!b) return std::nullopt;
      if (n.op == ExprOp::Add) return *a + *b;
      if (n.op == ExprOp::Sub) return *a - *b;
      if (n.op == ExprOp::Mul) return *a * *b;
      if (b->is_zero()) return std::nullopt;
      return *a / *b;
    }
    case ExprOp::Neg: {
      auto a = exact(*n.a);
      if (!a) return std::nullopt;
      return -*a;
    }
    case ExprOp::Pow: {
      auto a = exact(*n.a);
      auto b = exact(*n.b);
      if (!a || !b || !is_integer(*b) || abs(*b) > 4096) return std::nullopt;
      long k = boost::multiprecision::numerator(*b).convert_to<long>();
      if (k < 0 && a->is_zero()) return std::nullopt;
      Rational r = 1;
      for (long i = 0; i < std::abs(k); ++i) r *= *a;
      return k < 0 ? Rational(1) / r : r;
    }
    default: return std::nullopt;
  }
}

// ---------------------------------------------------------------- polynomials

using Grid = std::vector<std::vector<Rational>>;  // [x-degree][t-degree]

Grid grid_add(const Grid& a, const Grid& b, const Rational& sb) {
  Grid r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < r.size(); ++i) {
    std::size_t w = std::max(i < a.size() ? a[i].size() : 0, i < b.size() ? b[i].size() : 0);
    r[i].assign(w, Rational(0));
    if (i < a.size())
      for (std::size_t j = 0; j < a[i].size(); ++j) r[i][j] += a[i][j];
    if (i < b.size())
      for (std::size_t j = 0; j < b[i].size(); ++j) r[i][j] += sb * b[i][j];
  }
  return r;
}

Grid grid_mul(const Grid& a, const Grid& b) {
  if (a.empty() || b.empty()) return {};
  Grid r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k) {
      auto& row = r[i + k];
      if (a[i].empty() || b[k].empty()) continue;
      if (row.size() < a[i].size() + b[k].size() - 1) row.resize(a[i].size() + b[k].size() - 1, Rational(0));
      for (std::size_t j = 0; j < a[i].size(); ++j)
        for (std::size_t l = 0; l < b[k].size(); ++l) row[j + l] += a[i][j] * b[k][l];
    }
  return r;
}

std::optional<Grid> bivariate(const ExprNode& n) {
  if (auto c = exact(n)) return Grid{{*c}};
  switch (n.op) {
    case ExprOp::VarX: return Grid{{Rational(0)}, {Rational(1)}};
    case ExprOp::VarT: return Grid{{Rational(0), Rational(1)}};
    case ExprOp::Add:
    case ExprOp::Sub: {
      auto a = bivariate(*n.a);
      if (!a) return std::nullopt;
      auto b = bivariate(*n.b);
      if (!b) return std::nullopt;
      return grid_add(*a, *b, n.op == ExprOp::Add ? Rational(1) : Rational(-1));
    }
    case ExprOp::Neg: {
      auto a = bivariate(*n.a);
      if (!a) return std::nullopt;
      return grid_add(Grid{}, *a, Rational(-1));
    }
    case ExprOp::Mul: {
      auto a = bivariate(*n.a);
      if (!a) return std::nullopt;
      auto b = bivariate(*n.b);
      if (!b) return std::nullopt;
      return grid_mul(*a, *b);
    }
    case ExprOp::Div: {
      auto a = bivariate(*n.a);
      auto d = exact(*n.b);
      if (!a || !d || d->is_zero()) return std::nullopt;
      return grid_add(Grid{}, *a, Rational(1) / *d);
    }
    case ExprOp::Pow: {
      auto e = exact(*n.b);
      if (!e || !is_integer(*e) || *e < 0 || *e > 64) return std::nullopt;
      auto a = bivariate(*n.a);
      if (!a) return std::nullopt;
      Grid r{{Rational(1)}};
      for (long k = boost::multiprecision::numerator(*e).convert_to<long>(); k > 0; --k) r = grid_mul(r, *a);
      return r;
    }
    default: return std::nullopt;
  }
}

// ---------------------------------------------------------------- power sums

using Terms = std::vector<std::pair<ExprPtr, Rational>>;

ExprPtr fold_mul(const ExprPtr& a, const ExprPtr& b) {
  if (is_number(a, 1)) return b;
  if (is_number(b, 1)) return a;
  if (a->op == ExprOp::Number && b->op == ExprOp::Number) return num(a->number * b->number);
  return make(ExprOp::Mul, a, b);
}

Terms merge(Terms terms) {
  std::stable_sort(terms.begin(), terms.end(),
                   [](const auto& l, const auto& r) { return l.second < r.second; });
  Terms out;
  for (auto& term : terms) {
    if (!out.empty() && out.back().second == term.second) {
      ExprPtr& c = out.back().first;
      if (c->op == ExprOp::Number && term.first->op == ExprOp::Number)
        c = num(c->number + term.first->number);
      else
        c = make(ExprOp::Add, c, term.first);
    } else {
      out.push_back(term);
    }
  }
  std::erase_if(out, [](const auto& term) {
    auto v = exact(*term.first);
    return v && v->is_zero();
  });
  return out;
}

std::optional<Terms> power_terms(const ExprPtr& e) {
  const bool has_x = Parser::depends(e, ExprOp::VarX);
  if (Parser::depends(e, ExprOp::VarT)) return std::nullopt;
  if (!has_x) return Terms{{e, Rational(0)}};
  const ExprNode& n = *e;
  switch (n.op) {
    case ExprOp::VarX: return Terms{{num(1), Rational(1)}};
    case ExprOp::Add:
    case ExprOp::Sub: {
      auto a = power_terms(n.a);
      if (!a) return std::nullopt;
      auto b = power_terms(n.b);
      if (!b) return std::nullopt;
      for (auto& term : *b) {
        if (n.op == ExprOp::Sub) term.first = fold_mul(num(-1), term.first);
        a->push_back(term);
      }
      return merge(*a);
    }
    case ExprOp::Neg: {
      auto a = power_terms(n.a);
      if (!a) return std::nullopt;
      for (auto& term : *a) term.first = fold_mul(num(-1), term.first);
      return a;
    }
    case ExprOp::Mul: {
      auto a = power_terms(n.a);
      if (!a) return std::nullopt;
      auto b = power_terms(n.b);
      if (!b) return std::nullopt;
      Terms r;
      for (const auto& u : *a)
        for (const auto& v : *b) r.emplace_back(fold_mul(u.first, v.first), u.second + v.second);
      return merge(r);
    }
    case ExprOp::Div: {
      auto a = power_terms(n.a);
      if (!a) return std::nullopt;
      auto b = power_terms(n.b);
      if (!b || b->size() != 1) return std::nullopt;
      for (auto& term : *a) {
        term.first = make(ExprOp::Div, term.first, (*b)[0].first);
        term.second -= (*b)[0].second;
      }
      return merge(*a);
    }
    case ExprOp::Sqrt:
    case ExprOp::Pow: {
      std::optional<Rational> r = n.op == ExprOp::Sqrt ? Rational(1, 2) : exact(*n.b);
      if (!r || (n.op == ExprOp::Pow && Parser::depends(n.b, ExprOp::VarX))) return std::nullopt;
      auto a = power_terms(n.a);
      if (!a) return std::nullopt;
      if (a->size() == 1) {
        auto [c, beta] = (*a)[0];
        ExprPtr coeff = is_number(c, 1) ? c : make(ExprOp::Pow, c, num(*r));
        return Terms{{coeff, beta * *r}};
      }
      if (!is_integer(*r) || *r < 0 || *r > 64) return std::nullopt;
      Terms acc{{num(1), Rational(0)}};
      for (long k = boost::multiprecision::numerator(*r).convert_to<long>(); k > 0; --k) {
        Terms next;
        for (const auto& u : acc)
          for (const auto& v : *a) next.emplace_back(fold_mul(u.first, v.first), u.second + v.second);
        acc = merge(next);
      }
      return acc;
    }
    default: return std::nullopt;
  }
}

// ---------------------------------------------------------------- Taylor series

class Series {
 public:
  explicit Series(int degree) : d_(degree), c_(static_cast<std::size_t>((degree + 1) * (degree + 1)), Real(0)) {}

  int degree() const { return d_; }
  Real& at(int i, int j) { return c_[static_cast<std::size_t>(i * (d_ + 1) + j)]; }
  const Real& at(int i, int j) const { return c_[static_cast<std::size_t>(i * (d_ + 1) + j)]; }
  // element i of homogeneous layer n is the coefficient of x^i t^(n-i)
  Real& layer(int n, int i) { return at(i, n - i); }
  const Real& layer(int n, int i) const { return at(i, n - i); }

  static Series constant(int d, const Real& v) {
    Series s(d);
    s.at(0, 0) = v;
    return s;
  }

  Series operator+(const Series& o) const {
    Series r(d_);
    for (std::size_t k = 0; k < c_.size(); ++k) r.c_[k] = c_[k] + o.c_[k];
    return r;
  }
  Series operator-(const Series& o) const {
    Series r(d_);
    for (std::size_t k = 0; k < c_.size(); ++k) r.c_[k] = c_[k] - o.c_[k];
    return r;
  }
  Series scaled(const Real& s) const {
    Series r(d_);
    for (std::size_t k = 0; k < c_.size(); ++k) r.c_[k] = c_[k] * s;
    return r;
  }
  Series operator*(const Series& o) const {
    Series r(d_);
    for (int n = 0; n <= d_; ++n) add_layer_product(r, *this, o, n, 0, n, [](int) { return Real(1); });
    return r;
  }

  // out_n += sum_{k=kmin}^{kmax} w(k) A_k B_{n-k}
  template <class W>
  static void add_layer_product(Series& out, const Series& a, const Series& b, int n, int kmin, int kmax,
                                W w) {
    for (int k = kmin; k <= kmax; ++k) {
      Real wk = w(k);
      if (wk.is_zero()) continue;
      for (int i1 = 0; i1 <= k; ++i1) {
        const Real& av = a.layer(k, i1);
        if (av.is_zero()) continue;
        Real aw = av * wk;
        for (int i2 = 0; i2 <= n - k; ++i2) {
          const Real& bv = b.layer(n - k, i2);
          if (bv.is_zero()) continue;
          out.layer(n, i1 + i2) += aw * bv;
        }
      }
    }
  }

  void scale_layer(int n, const Real& s) {
    for (int i = 0; i <= n; ++i) layer(n, i) *= s;
  }

 private:
  int d_;
  std::vector<Real> c_;
};

[[noreturn]] void not_analytic(const char* what) {
  throw Error(ErrorCode::ValidationError,
              std::string("expression is not analytic at the origin (") + what + ")");
}

// f with E f = g E u, i.e. n f_n = sum_{k>=1} k u_k g_{n-k}; g may alias f's
// partially filled layers (g_j only read for j < n).
void integrate_euler(Series& f, const Series& u, const Series& g, int n) {
  Series::add_layer_product(f, u, g, n, 1, n, [](int k) { return Real(k); });
  f.scale_layer(n, Real(1) / Real(n));
}

Series series_exp(const Series& u) {
  const int d = u.degree();
  Series f = Series::constant(d, exp(u.at(0, 0)));
  for (int n = 1; n <= d; ++n) integrate_euler(f, u, f, n);
  return f;
}

Series series_pow_real(const Series& u, const Real& r) {
  const int d = u.degree();
  const Real u0 = u.at(0, 0);
  if (!(u0 > 0)) not_analytic("non-integer power of a series vanishing at 0");
  Series f = Series::constant(d, pow(u0, r));
  for (int n = 1; n <= d; ++n) {
    Series::add_layer_product(f, u, f, n, 1, n, [&](int k) { return r * k - (n - k); });
    f.scale_layer(n, 1 / (Real(n) * u0));
  }
  return f;
}

Series series_pow_int(Series base, long k) {
  Series r = Series::constant(base.degree(), Real(1));
  while (k > 0) {
    if (k & 1) r = r * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return r;
}

Series series_log(const Series& u) {
  const int d = u.degree();
  const Real u0 = u.at(0, 0);
  if (!(u0 > 0)) not_analytic("log");
  Series f = Series::constant(d, log(u0));
  for (int n = 1; n <= d; ++n) {
    Series acc(d);
    Series::add_layer_product(acc, f, u, n, 1, n - 1, [](int k) { return Real(k); });
    for (int i = 0; i <= n; ++i) f.layer(n, i) = (Real(n) * u.layer(n, i) - acc.layer(n, i)) / (Real(n) * u0);
  }
  return f;
}

Series series_div(const Series& a, const Series& b) {
  const int d = a.degree();
  const Real b0 = b.at(0, 0);
  if (b0.is_zero()) not_analytic("division by a series vanishing at 0");
  Series f(d);
  for (int n = 0; n <= d; ++n) {
    Series acc(d);
    Series::add_layer_product(acc, b, f, n, 1, n, [](int) { return Real(1); });
    for (int i = 0; i <= n; ++i) f.layer(n, i) = (a.layer(n, i) - acc.layer(n, i)) / b0;
  }
  return f;
}

Series series_erf(const Series& u) {
  const int d = u.degree();
  Series h = series_exp((u * u).scaled(Real(-1))).scaled(2 / sqrt(pi()));
  Series f = Series::constant(d, erf(u.at(0, 0)));
  for (int n = 1; n <= d; ++n) integrate_euler(f, u, h, n);
  return f;
}

std::pair<Series, Series> series_sin_cos(const Series& u) {
  const int d = u.degree();
  Series s = Series::constant(d, sin(u.at(0, 0)));
  Series c = Series::constant(d, cos(u.at(0, 0)));
  for (int n = 1; n <= d; ++n) {
    integrate_euler(s, u, c, n);
    Series tmp(d);
    integrate_euler(tmp, u, s, n);
    for (int i = 0; i <= n; ++i) c.layer(n, i) = -tmp.layer(n, i);
  }
  return {s, c};
}

Series taylor_series(const ExprPtr& e, int d) {
  if (!Parser::depends(e, ExprOp::VarX) && !Parser::depends(e, ExprOp::VarT))
    return Series::constant(d, eval(*e, Real(0), Real(0)));
  const ExprNode& n = *e;
  switch (n.op) {
    case ExprOp::VarX: {
      Series s(d);
      if (d >= 1) s.at(1, 0) = 1;
      return s;
    }
    case ExprOp::VarT: {
      Series s(d);
      if (d >= 1) s.at(0, 1) = 1;
      return s;
    }
    case ExprOp::Add: return taylor_series(n.a, d) + taylor_series(n.b, d);
    case ExprOp::Sub: return taylor_series(n.a, d) - taylor_series(n.b, d);
    case ExprOp::Neg: return taylor_series(n.a, d).scaled(Real(-1));
    case ExprOp::Mul: return taylor_series(n.a, d) * taylor_series(n.b, d);
    case ExprOp::Div: return series_div(taylor_series(n.a, d), taylor_series(n.b, d));
    case ExprOp::Exp: return series_exp(taylor_series(n.a, d));
    case ExprOp::Log: return series_log(taylor_series(n.a, d));
    case ExprOp::Sqrt: return series_pow_real(taylor_series(n.a, d), Real(1) / 2);
    case ExprOp::Erf: return series_erf(taylor_series(n.a, d));
    case ExprOp::Sin: return series_sin_cos(taylor_series(n.a, d)).first;
    case ExprOp::Cos: return series_sin_cos(taylor_series(n.a, d)).second;
    case ExprOp::Pow: {
      Series base = taylor_series(n.a, d);
      if (Parser::depends(n.b, ExprOp::VarX) || Parser::depends(n.b, ExprOp::VarT))
        return series_exp(taylor_series(n.b, d) * series_log(base));
      if (auto r = exact(*n.b); r && is_integer(*r) && *r >= 0 && *r <= 4096)
        return series_pow_int(base, boost::multiprecision::numerator(*r).convert_to<long>());
      return series_pow_real(base, eval(*n.b, Real(0), Real(0)));
    }
    default: not_analytic("unsupported operation");
  }
}

// ---------------------------------------------------------------- derivative

ExprPtr d_add(const ExprPtr& a, const ExprPtr& b) {
  if (is_number(a, 0)) return b;
  if (is_number(b, 0)) return a;
  if (a->op == ExprOp::Number && b->op == ExprOp::Number) return num(a->number + b->number);
  return make(ExprOp::Add, a, b);
}
ExprPtr d_neg(const ExprPtr& a) {
  if (a->op == ExprOp::Number) return num(-a->number);
  return make(ExprOp::Neg, a);
}
ExprPtr d_sub(const ExprPtr& a, const ExprPtr& b) {
  if (is_number(b, 0)) return a;
  if (is_number(a, 0)) return d_neg(b);
  if (a->op == ExprOp::Number && b->op == ExprOp::Number) return num(a->number - b->number);
  return make(ExprOp::Sub, a, b);
}
ExprPtr d_mul(const ExprPtr& a, const ExprPtr& b) {
  if (is_number(a, 0) || is_number(b, 0)) return num(0);
  return fold_mul(a, b);
}
ExprPtr d_div(const ExprPtr& a, const ExprPtr& b) {
  if (is_number(a, 0)) return num(0);
  if (is_number(b, 1)) return a;
  return make(ExprOp::Div, a, b);
}

ExprPtr diff(const ExprPtr& e) {
  if (!Parser::depends(e, ExprOp::VarX)) return num(0);
  const ExprNode& n = *e;
  switch (n.op) {
    case ExprOp::VarX: return num(1);
    case ExprOp::Add: return d_add(diff(n.a), diff(n.b));
    case ExprOp::Sub: return d_sub(diff(n.a), diff(n.b));
    case ExprOp::Neg: return d_neg(diff(n.a));
    case ExprOp::Mul: return d_add(d_mul(diff(n.a), n.b), d_mul(n.a, diff(n.b)));
    case ExprOp::Div:
      return d_div(d_sub(d_mul(diff(n.a), n.b), d_mul(n.a, diff(n.b))), make(ExprOp::Pow, n.b, num(2)));
    case ExprOp::Pow: {
      if (!Parser::depends(n.b, ExprOp::VarX)) {
        ExprPtr reduced = n.b->op == ExprOp::Number ? num(n.b->number - 1) : make(ExprOp::Sub, n.b, num(1));
        ExprPtr power = is_number(reduced, 0) ? num(1)
                        : is_number(reduced, 1) ? n.a
                                                : make(ExprOp::Pow, n.a, reduced);
        return d_mul(d_mul(n.b, power), diff(n.a));
      }
      ExprPtr inner = d_add(d_mul(diff(n.b), make(ExprOp::Log, n.a)), d_div(d_mul(n.b, diff(n.a)), n.a));
      return d_mul(e, inner);
    }
    case ExprOp::Exp: return d_mul(e, diff(n.a));
    case ExprOp::Log: return d_div(diff(n.a), n.a);
    case ExprOp::Sqrt: return d_div(diff(n.a), d_mul(num(2), e));
    case ExprOp::Erf: {
      ExprPtr c = make(ExprOp::Div, num(2), make(ExprOp::Sqrt, make(ExprOp::Pi)));
      ExprPtr g = make(ExprOp::Exp, make(ExprOp::Neg, make(ExprOp::Pow, n.a, num(2))));
      return d_mul(d_mul(c, g), diff(n.a));
    }
    case ExprOp::Sin: return d_mul(make(ExprOp::Cos, n.a), diff(n.a));
    case ExprOp::Cos: return d_neg(d_mul(make(ExprOp::Sin, n.a), diff(n.a)));
    default: return num(0);
  }
}

// ---------------------------------------------------------------- printing

int precedence(ExprOp op) {
  switch (op) {
    case ExprOp::Add:
    case ExprOp::Sub: return 1;
    case ExprOp::Mul:
    case ExprOp::Div: return 2;
    case ExprOp::Neg: return 3;
    case ExprOp::Pow: return 4;
    default: return 5;
  }
}

std::string print(const ExprNode& n) {
  auto wrap = [](const ExprNode& c, int min_prec) {
    std::string s = print(c);
    return precedence(c.op) < min_prec ? "(" + s + ")" : s;
  };
  auto call = [&](const char* f) { return std::string(f) + "(" + print(*n.a) + ")"; };
  switch (n.op) {
    case ExprOp::Number: {
      std::string s = format_rational(n.number);
      return n.number < 0 || s.find('/') != std::string::npos ? "(" + s + ")" : s;
    }
    case ExprOp::VarX: return "x";
    case ExprOp::VarT: return "t";
    case ExprOp::Pi: return "pi";
    case ExprOp::Add: return wrap(*n.a, 1) + " + " + wrap(*n.b, 2);
    case ExprOp::Sub: return wrap(*n.a, 1) + " - " + wrap(*n.b, 2);
    case ExprOp::Mul: return wrap(*n.a, 2) + "*" + wrap(*n.b, 3);
    case ExprOp::Div: return wrap(*n.a, 2) + "/" + wrap(*n.b, 3);
    case ExprOp::Neg: return "-" + wrap(*n.a, 3);
    case ExprOp::Pow: return wrap(*n.a, 5) + "^" + wrap(*n.b, 4);
    case ExprOp::Exp: return call("exp");
    case ExprOp::Log: return call("log");
    case ExprOp::Sqrt: return call("sqrt");
    case ExprOp::Erf: return call("erf");
    case ExprOp::Sin: return call("sin");
    case ExprOp::Cos: return call("cos");
    case ExprOp::Gamma: return call("gamma");
  }
  return "?";
}

}  // namespace

Real PowerTerm::coefficient_value() const { return coefficient->evaluate(Real(0), Real(0)); }

std::optional<Rational> PowerTerm::exact_coefficient() const { return coefficient->rational_value(); }

Expression::Expression() : root_(num(0)) {}

Expression::Expression(ExprPtr root) : root_(std::move(root)) {
  if (!root_) throw Error(ErrorCode::InvalidArgument, "null expression");
}

Expression Expression::constant(const Rational& value) { return Expression(num(value)); }

Expression Expression::parse(std::string_view text, int line, int column) {
  return Expression(Parser(text, line, column).run());
}

std::string Expression::to_string() const { return print(*root_); }

Real Expression::evaluate(const Real& x, const Real& t) const { return eval(*root_, x, t); }

bool Expression::depends_on_x() const { return Parser::depends(root_, ExprOp::VarX); }
bool Expression::depends_on_t() const { return Parser::depends(root_, ExprOp::VarT); }

std::optional<Rational> Expression::rational_value() const { return exact(*root_); }

std::optional<OpMatrix<Rational>> Expression::bivariate_polynomial() const {
  auto g = bivariate(*root_);
  if (!g) return std::nullopt;
  std::size_t rows = 1, cols = 1;
  for (std::size_t i = 0; i < g->size(); ++i)
    for (std::size_t j = 0; j < (*g)[i].size(); ++j)
      if (!(*g)[i][j].is_zero()) rows = std::max(rows, i + 1), cols = std::max(cols, j + 1);
  OpMatrix<Rational> k(rows, cols, MatrixKind::K);
  for (std::size_t i = 0; i < std::min(rows, g->size()); ++i)
    for (std::size_t j = 0; j < std::min(cols, (*g)[i].size()); ++j) k(i, j) = (*g)[i][j];
  return k;
}

std::optional<std::vector<PowerTerm>> Expression::power_sum() const {
  auto terms = power_terms(root_);
  if (!terms) return std::nullopt;
  std::vector<PowerTerm> out;
  for (auto& [c, e] : *terms) out.push_back(PowerTerm{std::make_shared<const Expression>(c), e});
  return out;
}

OpMatrix<Real> Expression::taylor(int degree) const {
  if (degree < 0) throw Error(ErrorCode::InvalidArgument, "negative Taylor degree");
  Series s = taylor_series(root_, degree);
  const auto dim = static_cast<std::size_t>(degree + 1);
  OpMatrix<Real> m(dim, dim, MatrixKind::K);
  for (int i = 0; i <= degree; ++i)
    for (int j = 0; i + j <= degree; ++j) m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = s.at(i, j);
  return m;
}

Expression Expression::derivative_x() const { return Expression(diff(root_)); }

}  // namespace fide
