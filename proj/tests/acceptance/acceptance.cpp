// Acceptance checks. `acceptance` runs every criterion; `acceptance K` runs
// criterion K only. One PASS/FAIL line per criterion; exit status 1 if any
// criterion failed.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fide/analysis.hpp"
#include "fide/fracops.hpp"
#include "fide/nonlinear.hpp"
#include "fide/problem_file.hpp"
#include "fide/tausolver.hpp"
#include "fide/verify.hpp"

using namespace fide;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string sci(const Real& v) { return format_sci(v, 3); }

Real max_coeff_gap(const LegVec<Real>& y, const std::vector<Rational>& expect) {
  Real m = 0;
  const std::size_t n = std::max(y.size(), expect.size());
  for (std::size_t i = 0; i < n; ++i) {
    Real a = i < y.size() ? y[i] : Real(0);
    Real b = i < expect.size() ? to_real(expect[i]) : Real(0);
    m = std::max(m, Real(abs(a - b)));
  }
  return m;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/// Exact recovery of a polynomial solution at low degree.
Outcome exact_recovery(const std::string& name, int p, int N, const std::vector<Rational>& expect,
                       bool check_grid, bool check_runtime, std::optional<Rational> alpha = {}) {
  set_precision(p);
  ProblemSpec problem = bundled_problem(name);
  if (alpha) problem = with_alpha(problem, *alpha);
  const auto t0 = std::chrono::steady_clock::now();
  SolutionReport r = solve(problem, N);
  const double elapsed = seconds_since(t0);
  const Real tol = ten_to_minus(25);
  const Real gap = max_coeff_gap(r.y_leg, expect);
  bool ok = r.status == SolveStatus::Converged && r.y_leg.size() == expect.size() && gap <= tol;
  std::ostringstream d;
  d << name << " N=" << N << " p=" << p << ": coefficient gap " << sci(gap);
  if (check_grid) {
    ok = ok && r.errors_vs_exact && r.errors_vs_exact->linf <= tol;
    d << ", grid error " << (r.errors_vs_exact ? sci(r.errors_vs_exact->linf) : std::string("n/a"));
  }
  if (check_runtime) {
    ok = ok && elapsed < 1.0;
    d << ", runtime " << elapsed << " s";
  }
  return {ok, d.str()};
}

Outcome criterion1() {
  return exact_recovery("example1", 40, 2, {Rational(-1, 6), Rational(0), Rational(1, 6)}, true, true);
}

Outcome criterion2() {
  set_precision(50);
  ProblemSpec p = bundled_problem("example2");
  if (p.alpha.alpha() != Rational(5, 3) || p.q != 3) return {false, "example2 is not alpha=5/3, q=3"};
  return exact_recovery("example2", 50, 2, {Rational(1, 3), Rational(1, 2), Rational(1, 6)}, false, true);
}

Outcome criterion3() {
  return exact_recovery("example3", 50, 1, {Rational(1, 2), Rational(1, 2)}, false, false, Rational(1));
}

/// Reference values for example3 at N = 10.
struct TableEntry {
  Rational alpha;
  const char* t;
  const char* value;
};

Outcome criterion4() {
  set_precision(50);
  const std::vector<TableEntry> table = {
      {Rational(1, 4), "0.1", "0.2369652099"}, {Rational(1, 4), "0.5", "0.9736630842"},
      {Rational(1, 4), "0.9", "1.3725002150"}, {Rational(1, 2), "0.1", "0.1650204533"},
      {Rational(1, 2), "0.5", "0.7220830368"}, {Rational(1, 2), "0.9", "1.1143148529"},
      {Rational(3, 4), "0.1", "0.1247524923"}, {Rational(3, 4), "0.5", "0.5841898369"},
      {Rational(3, 4), "0.9", "0.9803109824"},
  };
  const ProblemSpec base = bundled_problem("example3");
  Real worst = 0;
  std::ostringstream d;
  Rational current(-1);
  LegVec<Real> y;
  for (const TableEntry& e : table) {
    if (e.alpha != current) {
      SolutionReport r = solve(with_alpha(base, e.alpha), 10);
      if (r.status != SolveStatus::Converged) return {false, "solve did not converge at alpha=" + format_rational(e.alpha)};
      y = r.y_leg;
      current = e.alpha;
    }
    const Real got = y.evaluate(to_real(std::string_view(e.t)));
    const Real dev = abs(got - to_real(std::string_view(e.value)));
    worst = std::max(worst, dev);
    d << " [a=" << format_rational(e.alpha) << " t=" << e.t << " got " << format_sci(got, 10) << " reference "
      << e.value << "]";
  }
  const bool soft = worst <= Real("5e-3");
  const bool within_cap = worst <= Real("5e-2");
  std::string verdict = soft ? "within 5e-3" : within_cap ? "outside 5e-3 but within the 5e-2 cap" : "outside the 5e-2 cap";
  return {within_cap, "worst deviation " + sci(worst) + " (" + verdict + ");" + d.str()};
}

Outcome criterion5() {
  set_precision(50);
  const char* exact_column[] = {"1.000000000", "1.105170918", "1.221402758", "1.349858808",
                                "1.491824698", "1.648721271", "1.822118800", "2.013752707",
                                "2.225540928", "2.459603111", "2.718281828"};
  SolutionReport r = solve(bundled_problem("example4"), 32);
  if (r.status != SolveStatus::Converged) return {false, "example4 N=32 did not converge"};
  bool ok = true;
  Real worst = 0;
  std::string mismatches;
  for (int i = 0; i <= 10; ++i) {
    const Real t = Real(i) / 10;
    const Real y = r.y_leg.evaluate(t);
    worst = std::max(worst, Real(abs(y - exp(t))));
    const std::string rounded = y.str(9, std::ios::fixed);
    if (rounded != exact_column[i]) {
      ok = false;
      mismatches += " t=" + std::to_string(i) + "/10:" + rounded;
    }
  }
  ok = ok && worst < Real("5e-10");
  return {ok, "example4 N=32: max |y_N - e^t| on the 11 abscissae " + sci(worst) +
                  (mismatches.empty() ? ", all 9-decimal values agree" : ", mismatches" + mismatches)};
}

Outcome criterion6() {
  set_precision(60);
  const ProblemSpec problem = with_alpha(bundled_problem("example3"), Rational(1, 2));
  const std::vector<int> Ns = {2, 4, 8, 16};
  const char* reference[] = {"1.23e-2", "1.56e-4", "3.54e-9", "1.77e-15"};
  ConvergenceReport rep = convergence_sweep(problem, Ns, SweepMetric::IntegralResidual);
  bool ok = rep.rows.size() == Ns.size();
  std::ostringstream d;
  for (std::size_t i = 0; ok && i < rep.rows.size(); ++i) {
    const SweepRow& row = rep.rows[i];
    if (!row.value || row.status != "CONVERGED") {
      ok = false;
      break;
    }
    if (i > 0) ok = ok && *row.value < *rep.rows[i - 1].value;
    d << " [N=" << row.N << " residual " << sci(*row.value) << " reference " << reference[i] << "]";
  }
  return {ok, std::string(ok ? "strictly decreasing:" : "not strictly decreasing:") + d.str()};
}

/// Polynomials with monomial coefficients, their exact derivatives.
std::vector<Rational> derive(std::vector<Rational> a, int r) {
  for (int k = 0; k < r; ++k) {
    std::vector<Rational> d;
    for (std::size_t i = 1; i < a.size(); ++i) d.push_back(a[i] * Rational(static_cast<long>(i)));
    a = d;
  }
  return a;
}

Real horner(const std::vector<Rational>& a, const Real& x) {
  Real s = 0;
  for (std::size_t i = a.size(); i-- > 0;) s = s * x + to_real(a[i]);
  return s;
}

Outcome criterion7() {
  set_precision(50);
  using V = std::vector<Rational>;
  const std::vector<V> polys = {
      {Rational(1), Rational(1)},
      {Rational(0), Rational(0), Rational(1)},
      {Rational(0), Rational(-1), Rational(0), Rational(1)},
      {Rational(3), Rational(0), Rational(-1), Rational(0), Rational(2)},
      {Rational(1), Rational(-3), Rational(3), Rational(-1)},
      {Rational(1, 2), Rational(2, 3), Rational(-5, 4), Rational(1, 5), Rational(-1, 7)},
  };
  const std::vector<Rational> alphas = {Rational(1, 4), Rational(1, 2), Rational(3, 4), Rational(3, 2)};
  const std::vector<int> Ns = {4, 8, 12};

  // Oracle values are independent of N.
  std::vector<Real> oracle;
  for (const V& p : polys)
    for (const Rational& a : alphas) {
      const FracOrder order(a);
      const V dm = derive(p, order.m());
      CaputoOracleOptions o;
      o.derivative = [dm](const Real& x) { return horner(dm, x); };
      for (int k = 1; k <= 9; ++k)
        oracle.push_back(caputo_oracle([p](const Real& x) { return horner(p, x); }, order, Real(k) / 10, o));
    }

  std::vector<Real> gaps;
  for (int N : Ns) {
    Real worst = 0;
    std::size_t idx = 0;
    for (const V& p : polys) {
      LegVec<Real> y = convert<Real>(to_leg(MonoVec<Rational>(p), N));
      for (const Rational& a : alphas) {
        const HMatrix<Real> H = build_H<Real>(FracOrder(a), N, N + 1);
        const LegVec<Real> d = apply_H(y, H);
        for (int k = 1; k <= 9; ++k, ++idx) worst = std::max(worst, Real(abs(d.evaluate(Real(k) / 10) - oracle[idx])));
      }
    }
    gaps.push_back(worst);
  }
  const bool monotone = gaps[1] < gaps[0] && gaps[2] < gaps[1];
  const bool small = gaps[2] <= Real("1e-8");
  std::ostringstream d;
  d << "max gap N=4: " << sci(gaps[0]) << ", N=8: " << sci(gaps[1]) << ", N=12: " << sci(gaps[2]) << " ("
    << (monotone ? "monotone" : "not monotone") << ", N=12 gap " << (small ? "<=" : ">") << " 1e-8)";
  return {monotone && small, d.str()};
}

/// Independent Legendre coefficients: c_i = (2i+1) \int_0^1 p L_{1,i} with the
/// explicit sum L_{1,i}(x) = sum_k (-1)^(i+k) C(i,k) C(i+k,k) x^k.
Rational binomial(int n, int k) {
  Rational r = 1;
  for (int j = 1; j <= k; ++j) r = r * Rational(n - k + j) / Rational(j);
  return r;
}

std::vector<Rational> legendre_coeffs(const std::vector<Rational>& p, int N) {
  std::vector<Rational> c(static_cast<std::size_t>(N) + 1);
  for (int i = 0; i <= N; ++i) {
    Rational s = 0;
    for (int k = 0; k <= i; ++k) {
      const Rational lk = ((i + k) % 2 ? -1 : 1) * binomial(i, k) * binomial(i + k, k);
      for (std::size_t j = 0; j < p.size(); ++j) s += p[j] * lk / Rational(static_cast<long>(j) + k + 1);
    }
    c[static_cast<std::size_t>(i)] = Rational(2 * i + 1) * s;
  }
  return c;
}

std::vector<Rational> convolve(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  std::vector<Rational> r(a.size() + b.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

Outcome criterion8() {
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<int> num(-9, 9), den(1, 7), degree(0, 4), power(1, 5);
  int failures = 0;
  std::string first;
  const int cases = 300;
  for (int c = 0; c < cases; ++c) {
    const int deg = degree(rng);
    const int q = power(rng);
    std::vector<Rational> p(static_cast<std::size_t>(deg) + 1);
    for (auto& v : p) v = Rational(num(rng), den(rng));
    const int dim = q * deg + 1;
    const LegVec<Rational> y(legendre_coeffs(p, deg));

    std::vector<Rational> expect{Rational(1)};
    for (int k = 0; k < q; ++k) expect = convolve(expect, p);
    expect.resize(static_cast<std::size_t>(dim), Rational(0));

    bool ok = true;
    const Applied<Rational> b = power_coeffs(y, q, dim);
    ok = ok && !b.truncation_loss && b.value.coeffs() == expect;

    const OpMatrix<Rational> Y = build_Y(y, dim);
    const DeltaMatrix<Rational> D = build_Delta(y, q, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        const std::size_t off = static_cast<std::size_t>(j - i);
        const Rational yv = j >= i && off < p.size() ? p[off] : Rational(0);
        const Rational dv = j >= i ? expect[off] : Rational(0);
        ok = ok && Y(i, j) == yv && D.entries(i, j) == dv;
      }
    if (!ok && failures++ == 0) first = "first mismatch at case " + std::to_string(c);
  }
  return {failures == 0, std::to_string(cases) + " instances, " + std::to_string(failures) + " mismatches" +
                             (first.empty() ? "" : "; " + first)};
}

Outcome criterion9() {
  set_precision(50);
  bool ok = true;
  std::string detail;
  for (const VerifyResult& r : run_verify()) {
    ok = ok && r.passed;
    detail += std::string(detail.empty() ? "" : "; ") + r.name + (r.passed ? " ok" : " FAILED: " + r.detail);
  }
  return {ok, detail};
}

Outcome criterion10() {
  set_precision(50);
  SolutionReport r = solve(bundled_problem("example1"), 2);
  std::vector<Real> res;
  for (const NewtonStep& s : r.newton_trace) res.push_back(s.residual_norm);
  // Residuals at the rounding floor carry no rate information.
  const Real floor = ten_to_minus(precision() - 5);
  while (!res.empty() && res.back() <= floor) res.pop_back();
  std::ostringstream d;
  bool quadratic = false;
  if (r.status == SolveStatus::Converged && res.size() >= 3) {
    const std::size_t n = res.size();
    const Real r0 = res[n - 3], r1 = res[n - 2], r2 = res[n - 1];
    const Real order = log(r2 / r1) / log(r1 / r0);
    const Real c1 = r1 / (r0 * r0), c2 = r2 / (r1 * r1);
    quadratic = order > Real("1.8") && order < Real("2.2") && c2 < 10 * c1;
    d << "example1 residuals " << sci(r0) << ", " << sci(r1) << ", " << sci(r2) << ": order " << format_sci(order, 4)
      << ", r_{k+1}/r_k^2 " << sci(c1) << ", " << sci(c2);
  } else {
    d << "example1 trace too short (" << res.size() << " usable residuals)";
  }

  const char* probe = R"(
[problem]
name = linear_probe
alpha = 1/2
q = 1
[kernel]
k = 1 + x*t
[source]
f = 2*x^(1/2)/gamma(1/2) - 3/2 - 5/6*x
[initial]
d0 = 1
[exact]
y = 1 + x
)";
  // Start from zero: the default initial guess already solves a linear system.
  SolveOptions from_zero;
  from_zero.initial_guess = LegVec<Real>(5);
  SolutionReport lin = solve(parse_problem_text(probe), 4, from_zero);
  const bool one_step = lin.status == SolveStatus::Converged && lin.newton_trace.size() == 2;
  d << "; linear probe: " << lin.newton_trace.size() - 1 << " Newton step(s), final residual "
    << sci(lin.residual_norm);
  return {quadratic && one_step, d.str()};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria = {criterion1, criterion2, criterion3, criterion4,
                                                          criterion5, criterion6, criterion7, criterion8,
                                                          criterion9, criterion10};
  std::vector<int> which;
  if (argc > 1) {
    const int k = std::atoi(argv[1]);
    if (k < 1 || k > static_cast<int>(criteria.size())) {
      std::fprintf(stderr, "usage: %s [1-%zu]\n", argv[0], criteria.size());
      return 2;
    }
    which.push_back(k);
  } else {
    for (int k = 1; k <= static_cast<int>(criteria.size()); ++k) which.push_back(k);
  }
  bool all = true;
  for (int k : which) {
    Outcome o;
    try {
      o = criteria[static_cast<std::size_t>(k - 1)]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all = all && o.passed;
    std::printf("criterion %d: %s - %s\n", k, o.passed ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
