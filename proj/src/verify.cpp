#include "fide/verify.hpp"

#include <random>
#include <sstream>

#include "fide/analysis.hpp"
#include "fide/fracops.hpp"
#include "fide/nonlinear.hpp"
#include "fide/opmat.hpp"
#include "fide/quadrature.hpp"

namespace fide {
namespace {

using Poly = std::vector<Rational>;

Rational random_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 7);
  return Rational(num(rng), den(rng));
}

Poly random_poly(std::mt19937_64& rng, int degree) {
  Poly p(static_cast<std::size_t>(degree) + 1);
  for (Rational& c : p) c = random_rational(rng);
  return p;
}

int random_int(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

Poly convolve(const Poly& a, const Poly& b) {
  Poly r(a.size() + b.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

Poly padded(Poly p, std::size_t n) {
  p.resize(std::max(p.size(), n), Rational(0));
  return p;
}

Poly trimmed(Poly p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
  return p;
}

Rational horner(const Poly& p, const Rational& x) {
  Rational s = 0;
  for (std::size_t i = p.size(); i-- > 0;) s = s * x + p[i];
  return s;
}

Real horner(const Poly& p, const Real& x) {
  Real s = 0;
  for (std::size_t i = p.size(); i-- > 0;) s = s * x + to_real(p[i]);
  return s;
}

/// \int_0^1 x^k over monomials, by direct summation.
Rational unit_integral(const Poly& p) {
  Rational s = 0;
  for (std::size_t i = 0; i < p.size(); ++i) s += p[i] / Rational(static_cast<long>(i + 1));
  return s;
}

class Tally {
 public:
  explicit Tally(std::string name) { r_.name = std::move(name); }
  void fail(const std::string& what) {
    if (r_.detail.empty()) r_.detail = what;
    failed_ = true;
  }
  void check(bool ok, const std::string& what) {
    ++cases_;
    if (!ok) fail(what);
  }
  void gap(const Real& g) {
    if (g > worst_) worst_ = g;
  }
  VerifyResult done(bool report_gap = false) {
    r_.passed = !failed_;
    if (!failed_) {
      std::ostringstream out;
      out << cases_ << " checks";
      if (report_gap) out << ", worst deviation " << format_sci(worst_, 3);
      r_.detail = out.str();
    }
    return r_;
  }

 private:
  VerifyResult r_;
  bool failed_ = false;
  int cases_ = 0;
  Real worst_ = 0;
};

std::string str(const Rational& r) { return format_rational(r); }

}  // namespace

VerifyResult verify_orthogonality(int max_degree) {
  Tally t("orthogonality");
  for (int i = 0; i <= max_degree; ++i)
    for (int j = 0; j <= max_degree; ++j) {
      Rational v = unit_integral(convolve(shifted_legendre(i).coeffs(), shifted_legendre(j).coeffs()));
      Rational want = i == j ? Rational(1, 2 * i + 1) : Rational(0);
      t.check(v == want, "(L" + std::to_string(i) + ", L" + std::to_string(j) + ") = " + str(v));
    }
  return t.done();
}

VerifyResult verify_basis_change(std::uint64_t seed, int cases) {
  Tally t("basis_change");
  std::mt19937_64 rng(seed);
  OpMatrix<Rational> phi = phi_matrix<Rational>(33);
  t.check(phi.is_lower_triangular(), "Phi(33) is not lower triangular");
  for (int i = 0; i < cases; ++i) {
    const int deg = random_int(rng, 0, 14);
    Poly p = random_poly(rng, deg);
    const int N = deg + random_int(rng, 0, 3);
    LegVec<Rational> y = to_leg(MonoVec<Rational>(p), N);
    MonoVec<Rational> back = to_mono(y, N + 1);
    t.check(trimmed(back.coeffs()) == trimmed(p), "round trip failed at degree " + std::to_string(deg));
    // projection is idempotent
    t.check(to_leg(to_mono(y, N + 1), N) == y, "projection not idempotent");
    // and agrees with evaluation by recurrence
    Rational x(random_int(rng, 0, 10), 10);
    t.check(y.evaluate(x) == horner(p, x), "recurrence evaluation disagrees");
  }
  return t.done();
}

VerifyResult verify_operational_identities(std::uint64_t seed, int cases) {
  Tally t("operational_identities");
  std::mt19937_64 rng(seed);
  const int dim = 16;
  OpMatrix<Rational> M = build_M<Rational>(dim), N = build_N<Rational>(dim), P = build_P<Rational>(dim);
  MonoVec<Rational> moments = moment_vector<Rational>(dim);
  for (int c = 0; c < cases; ++c) {
    const int deg = random_int(rng, 0, 10);
    Poly p = random_poly(rng, deg);
    MonoVec<Rational> y(padded(p, dim));
    // y M = y'
    Poly d(p.size() > 1 ? p.size() - 1 : 0);
    for (std::size_t i = 1; i < p.size(); ++i) d[i - 1] = p[i] * Rational(static_cast<long>(i));
    t.check(trimmed(differentiate(y, M).coeffs()) == trimmed(d), "y M != y'");
    // y N = x y
    Poly xp(p.size() + 1, Rational(0));
    for (std::size_t i = 0; i < p.size(); ++i) xp[i + 1] = p[i];
    Applied<Rational> shifted = multiply_by_x(y, N);
    t.check(!shifted.truncation_loss && trimmed(shifted.value.coeffs()) == trimmed(xp), "y N != x y");
    // (y P) M = y and \int_0^1 y = y . moments
    Applied<Rational> anti = antiderivative(y, P);
    t.check(!anti.truncation_loss && differentiate(anti.value, M) == y, "(y P) M != y");
    t.check(integrate_unit(y, moments) == unit_integral(p), "moment integral wrong");
    // fundamental theorem: y P X_x - y P X_a = \int_a^x y
    Rational a(random_int(rng, 0, 5), 7), x(random_int(rng, 3, 9), 9);
    Poly prim(p.size() + 1, Rational(0));
    for (std::size_t i = 0; i < p.size(); ++i) prim[i + 1] = p[i] / Rational(static_cast<long>(i + 1));
    t.check(definite_integral(y, P, a, x) == horner(prim, x) - horner(prim, a), "definite integral wrong");
  }
  return t.done();
}

VerifyResult verify_power_oracle(std::uint64_t seed, int cases) {
  Tally t("power_oracle");
  std::mt19937_64 rng(seed);
  for (int c = 0; c < cases; ++c) {
    const int deg = random_int(rng, 0, 4);
    const int q = random_int(rng, 1, 5);
    Poly p = random_poly(rng, deg);
    const int dim = q * deg + 1 + random_int(rng, 0, 2);
    LegVec<Rational> y = to_leg(MonoVec<Rational>(p), deg);
    Poly want{Rational(1)};
    for (int k = 0; k < q; ++k) want = convolve(want, p);
    want = padded(want, static_cast<std::size_t>(dim));
    Applied<Rational> got = power_coeffs(y, q, dim);
    t.check(!got.truncation_loss && got.value.coeffs() == want,
            "y^" + std::to_string(q) + " wrong at degree " + std::to_string(deg));
    OpMatrix<Rational> Y = build_Y(y, dim);
    Poly cp = padded(p, static_cast<std::size_t>(dim));
    DeltaMatrix<Rational> D = build_Delta(y, q, dim);
    bool ok = true;
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        ok = ok && Y(i, j) == (j >= i ? cp[j - i] : Rational(0));
        ok = ok && D.entries(i, j) == (j >= i ? want[j - i] : Rational(0));
      }
    t.check(ok, "Y or Delta entries disagree with the Toeplitz oracle");
  }
  return t.done();
}

VerifyResult verify_fredholm_quadrature(std::uint64_t seed, int cases) {
  Tally t("fredholm_quadrature");
  std::mt19937_64 rng(seed);
  const auto nodes = gauss_legendre_nodes(40);
  for (int c = 0; c < cases; ++c) {
    const int deg = random_int(rng, 0, 4);
    const int q = random_int(rng, 1, 3);
    Poly p = random_poly(rng, deg);
    OpMatrix<Rational> K(3, 3, MatrixKind::K);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) K(i, j) = random_rational(rng);
    KernelSpec spec = KernelSpec::polynomial(K);
    const Rational lambda = random_rational(rng);
    const int dim = q * deg + 3;
    LegVec<Real> y = convert<Real>(to_leg(MonoVec<Rational>(p), deg));
    MonoVec<Real> F = fredholm_term(y, spec, q, to_real(lambda), dim).value;
    for (int s = 0; s <= 4; ++s) {
      Real x = Real(s) / 4;
      Real acc = 0;
      for (const QuadNode& n : nodes) {
        Real k = 0;
        for (std::size_t i = 0; i < 3; ++i)
          for (std::size_t j = 0; j < 3; ++j) k += to_real(K(i, j)) * pow(x, i) * pow(n.x, j);
        acc += n.w * k * pow(horner(p, n.x), q);
      }
      acc *= to_real(lambda);
      Real g = abs(F.evaluate(x) - acc) / (1 + abs(acc));
      t.gap(g);
      t.check(g < ten_to_minus(precision()), "Fredholm term off by " + format_sci(g, 3));
    }
  }
  return t.done(true);
}

VerifyResult verify_sobolev(std::uint64_t seed, int cases) {
  Tally t("sobolev");
  std::mt19937_64 rng(seed);
  for (int c = 0; c < cases; ++c) {
    Poly p = random_poly(rng, random_int(rng, 0, 12));
    SobolevResult s = sobolev_check(MonoVec<Rational>(p));
    t.check(s.holds, "sup " + format_sci(s.lhs, 6) + " > bound " + format_sci(s.rhs, 6));
  }
  return t.done();
}

VerifyResult verify_fractional_identity(std::uint64_t seed, int cases) {
  // J^a D^a f = f - sum_{k<m} f^(k)(0) x^k/k!  and  D^a J^a f = f
  Tally t("fractional_identity");
  std::mt19937_64 rng(seed);
  const Rational orders[] = {Rational(1, 4), Rational(1, 2), Rational(3, 4), Rational(4, 3), Rational(5, 3)};
  const Real tol = ten_to_minus(precision() / 3);
  const Real quad_tol = ten_to_minus(precision() / 2);
  for (int c = 0; c < cases; ++c) {
    const FracOrder order(orders[c % 5]);
    const Real a = order.alpha_real();
    const int m = order.m();
    Poly p = random_poly(rng, random_int(rng, 0, 4));

    std::vector<CaputoTerm> dterms;
    for (std::size_t k = 0; k < p.size(); ++k) {
      CaputoTerm term = caputo_monomial(Rational(static_cast<long>(k)), order);
      term.coefficient *= to_real(p[k]);
      if (!term.coefficient.is_zero()) dterms.push_back(term);
    }
    RealFunction dfa = [&](const Real& x) {
      Real s = 0;
      for (const CaputoTerm& term : dterms) s += term.coefficient * pow(x, to_real(term.exponent));
      return s;
    };
    // J^a f has terms k!/Gamma(k+1+a) x^(k+a)
    auto ja = [&](const Real& x, int r) {
      Real s = 0;
      for (std::size_t k = 0; k < p.size(); ++k) {
        Real e = Real(static_cast<long>(k)) + a;
        Real coef = to_real(p[k]) * tgamma(Real(static_cast<long>(k + 1))) / tgamma(e + 1);
        for (int i = 0; i < r; ++i) coef *= e - i;
        s += coef * pow(x, e - r);
      }
      return s;
    };
    for (int s = 1; s <= 4; ++s) {
      Real x = Real(s) / 4;
      Real lhs1 = riemann_liouville_integral(dfa, a, x, quad_tol);
      Real rhs1 = horner(p, x);
      Real xp = 1;
      for (int k = 0; k < m && k < static_cast<int>(p.size()); ++k, xp *= x) rhs1 -= to_real(p[k]) * xp;
      Real g1 = abs(lhs1 - rhs1);

      CaputoOracleOptions opts;
      opts.derivative = [&](const Real& u) { return ja(u, m); };
      opts.tol = quad_tol;
      Real lhs2 = caputo_oracle([&](const Real& u) { return ja(u, 0); }, order, x, opts);
      Real g2 = abs(lhs2 - horner(p, x));
      t.gap(std::max(g1, g2));
      t.check(g1 < tol, "J^a D^a f off by " + format_sci(g1, 3) + " at alpha " + str(order.alpha()));
      t.check(g2 < tol, "D^a J^a f off by " + format_sci(g2, 3) + " at alpha " + str(order.alpha()));
    }
  }
  return t.done(true);
}

std::vector<VerifyResult> run_verify(const VerifyOptions& o) {
  std::vector<VerifyResult> r;
  r.push_back(verify_orthogonality());
  r.push_back(verify_basis_change(o.seed));
  r.push_back(verify_operational_identities(o.seed + 1));
  r.push_back(verify_power_oracle(o.seed + 2, o.power_cases));
  r.push_back(verify_fredholm_quadrature(o.seed + 3));
  r.push_back(verify_sobolev(o.seed + 4, o.sobolev_cases));
  r.push_back(verify_fractional_identity(o.seed + 5));
  return r;
}

}  // namespace fide
