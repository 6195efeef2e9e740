#include "fide/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "fide/error.hpp"
#include "fide/quadrature.hpp"

namespace fide {
namespace {

using boost::multiprecision::log;
using boost::multiprecision::pow;
using boost::multiprecision::sqrt;

/// Golden-section maximisation of |g| on [a, b].
Real refine_max(const std::function<Real(const Real&)>& g, Real a, Real b, Real* where) {
  const Real ratio = (sqrt(Real(5)) - 1) / 2;
  Real c = b - ratio * (b - a);
  Real d = a + ratio * (b - a);
  Real gc = abs(g(c)), gd = abs(g(d));
  const Real stop = ten_to_minus(precision() / 2);
  for (int it = 0; it < 200 && b - a > stop; ++it) {
    if (gc > gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - ratio * (b - a);
      gc = abs(g(c));
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + ratio * (b - a);
      gd = abs(g(d));
    }
  }
  if (gc > gd) {
    *where = c;
    return gc;
  }
  *where = d;
  return gd;
}

/// Sampled sup of |g| on [0,1] with refinement around the best sample.
Real sup_norm(const std::function<Real(const Real&)>& g, int grid, Real* argmax) {
  if (grid < 2) grid = 2;
  Real best = -1;
  int best_i = 0;
  for (int i = 0; i < grid; ++i) {
    Real v = abs(g(Real(i) / (grid - 1)));
    if (v > best) best = v, best_i = i;
  }
  Real where = Real(best_i) / (grid - 1);
  Real a = Real(std::max(best_i - 1, 0)) / (grid - 1);
  Real b = Real(std::min(best_i + 1, grid - 1)) / (grid - 1);
  Real x;
  Real refined = refine_max(g, a, b, &x);
  if (refined > best) {
    best = refined;
    where = x;
  }
  if (argmax) *argmax = where;
  return best;
}

template <class T>
MonoVec<T> mono_derivative(const MonoVec<T>& p) {
  if (p.size() <= 1) return MonoVec<T>(std::size_t{1});
  MonoVec<T> d(p.size() - 1);
  for (std::size_t i = 1; i < p.size(); ++i) d[i - 1] = p[i] * T(static_cast<long>(i));
  return d;
}

// Integrates the vector integrand by Gauss-Legendre doubling, then tanh-sinh.
std::vector<Real> integrate_components(const std::function<void(const Real&, std::vector<Real>&)>& f,
                                       std::size_t components, const Real& tol) {
  VectorQuadratureResult gl = gauss_legendre_vector(f, components, tol, 64, 1024);
  if (gl.converged) return gl.values;
  auto g = [&f](const Real& x, const Real&, std::vector<Real>& out) { f(x, out); };
  VectorQuadratureResult ts = tanh_sinh_vector(g, components, tol);
  if (ts.converged) return ts.values;
  throw Error(ErrorCode::NonConvergedQuadrature,
              "error norm quadrature did not converge (estimate " + format_sci(ts.error_estimate, 6) + ")");
}

Real pearson(const std::vector<Real>& a, const std::vector<Real>& b) {
  const auto n = static_cast<long>(a.size());
  Real ma = 0, mb = 0;
  for (long i = 0; i < n; ++i) ma += a[i], mb += b[i];
  ma /= n;
  mb /= n;
  Real sab = 0, saa = 0, sbb = 0;
  for (long i = 0; i < n; ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa.is_zero() || sbb.is_zero()) return Real(0);
  return sab / sqrt(saa * sbb);
}

Real slope(const std::vector<Real>& a, const std::vector<Real>& b) {
  const auto n = static_cast<long>(a.size());
  Real ma = 0, mb = 0;
  for (long i = 0; i < n; ++i) ma += a[i], mb += b[i];
  ma /= n;
  mb /= n;
  Real sab = 0, saa = 0;
  for (long i = 0; i < n; ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
  }
  return saa.is_zero() ? Real(0) : sab / saa;
}

// ---- memoized manufactured source

class Memo {
 public:
  explicit Memo(RealFunction f) : f_(std::move(f)) {}
  Real operator()(const Real& x) {
    std::pair<int, Real> key{working_digits(), x};
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = cache_.find(key);
      if (it != cache_.end()) return it->second;
    }
    Real v = f_(x);
    std::lock_guard<std::mutex> lock(mu_);
    cache_.emplace(std::move(key), v);
    return v;
  }

 private:
  RealFunction f_;
  std::mutex mu_;
  std::map<std::pair<int, Real>, Real> cache_;
};

}  // namespace

template <class T>
LegVec<T> legendre_derivative(const LegVec<T>& y) {
  // d/dx sum a_j L_{1,j} = sum_k 2(2k+1) (sum_{j>k, j-k odd} a_j) L_{1,k}
  const std::size_t n = y.size();
  LegVec<T> d(n > 1 ? n - 1 : 1);
  if (n <= 1) return d;
  std::vector<T> tail_even(n + 1, T(0)), tail_odd(n + 1, T(0));
  for (std::size_t j = n; j-- > 0;) {
    tail_even[j] = tail_even[j + 1];
    tail_odd[j] = tail_odd[j + 1];
    if (j % 2 == 0)
      tail_even[j] += y[j];
    else
      tail_odd[j] += y[j];
  }
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const T& tail = (k % 2 == 0) ? tail_odd[k + 1] : tail_even[k + 1];
    d[k] = T(static_cast<long>(2 * (2 * k + 1))) * tail;
  }
  return d;
}

template LegVec<Real> legendre_derivative(const LegVec<Real>&);
template LegVec<Rational> legendre_derivative(const LegVec<Rational>&);

ErrorReport error_norms(const LegVec<Real>& y, const ExactSolution& exact, int grid,
                        const std::vector<int>& seminorm_orders) {
  if (grid < 2) throw Error(ErrorCode::InvalidArgument, "error grid needs at least 2 points");
  int max_order = 1;
  for (int k : seminorm_orders) max_order = std::max(max_order, k);
  if (max_order > ExactSolution::kMaxDerivative) {
    throw Error(ErrorCode::InvalidArgument, "seminorm order above " + std::to_string(ExactSolution::kMaxDerivative));
  }
  std::vector<LegVec<Real>> dy{y};
  for (int k = 1; k <= max_order; ++k) dy.push_back(legendre_derivative(dy.back()));

  ErrorReport r;
  auto err = [&](const Real& x) { return y.evaluate(x) - exact.value(x); };
  r.linf = sup_norm(err, grid, &r.argmax);

  const auto comps = static_cast<std::size_t>(max_order + 1);
  auto integrand = [&](const Real& x, std::vector<Real>& out) {
    for (std::size_t k = 0; k < comps; ++k) {
      Real e = dy[k].evaluate(x) - exact.derivative(x, static_cast<int>(k));
      out[k] = e * e;
    }
  };
  // scale the absolute tolerance to the sampled magnitude of each component
  Real scale = r.linf * r.linf;
  Real magnitude = 1;
  for (std::size_t k = 0; k < comps; ++k) {
    for (int i = 0; i <= 16; ++i) {
      Real x = Real(i) / 16;
      Real ex = exact.derivative(x, static_cast<int>(k));
      Real e = dy[k].evaluate(x) - ex;
      if (e * e > scale) scale = e * e;
      magnitude = std::max(magnitude, abs(ex));
    }
  }
  // e is only known to about eps * |y^(k)|, which bounds how well e^2 can be integrated
  const Real eps = ten_to_minus(working_digits() - 10) * magnitude;
  const Real tol = ten_to_minus(precision() / 2) * scale + eps * (2 * sqrt(scale) + eps) +
                   ten_to_minus(3 * precision());
  std::vector<Real> sq = integrate_components(integrand, comps, tol);
  r.l2 = sqrt(sq[0]);
  r.h1 = sqrt(sq[0] + sq[1]);
  for (int k : seminorm_orders) {
    // |e|_{H^{k;N}}^2 = sum_{j=min(k,N+1)}^{k} ||e^(j)||^2
    const int lo = std::min(k, static_cast<int>(y.size()));
    Real s = 0;
    for (int j = lo; j <= k; ++j) s += sq[static_cast<std::size_t>(j)];
    r.seminorms.emplace_back(k, sqrt(s));
  }
  return r;
}

ErrorReport error_norms(const LegVec<Rational>& y, const MonoVec<Rational>& exact, int grid) {
  const int dim = static_cast<int>(std::max(y.size(), exact.size()));
  MonoVec<Rational> p = to_mono(y, dim);
  MonoVec<Rational> ex = exact.resized(static_cast<std::size_t>(dim));
  MonoVec<Rational> e(static_cast<std::size_t>(dim));
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = p[i] - ex[i];
  MonoVec<Rational> de = mono_derivative(e);
  Rational l2sq = inner_product(e, e);
  Rational d1sq = inner_product(de, de);
  ErrorReport r;
  r.l2 = sqrt(to_real(l2sq));
  r.h1 = sqrt(to_real(l2sq + d1sq));
  Rational best = 0;
  int best_i = 0;
  for (int i = 0; i < grid; ++i) {
    Rational v = abs(e.evaluate(Rational(i, grid - 1)));
    if (v > best) best = v, best_i = i;
  }
  MonoVec<Real> er = convert<Real>(e);
  Real where;
  Real refined = best.is_zero() ? Real(0)
                                : refine_max([&](const Real& x) { return er.evaluate(x); },
                                             Real(std::max(best_i - 1, 0)) / (grid - 1),
                                             Real(std::min(best_i + 1, grid - 1)) / (grid - 1), &where);
  r.linf = std::max(to_real(best), refined);
  r.argmax = Real(best_i) / (grid - 1);
  return r;
}

SobolevResult sobolev_check(const MonoVec<Real>& e) {
  SobolevResult s;
  s.lhs = sup_norm([&](const Real& x) { return e.evaluate(x); }, 1025, nullptr);
  MonoVec<Real> de = mono_derivative(e);
  Real l2sq = inner_product(e, e);
  Real d1sq = inner_product(de, de);
  if (l2sq < 0) l2sq = 0;
  s.rhs = sqrt(Real(3)) * sqrt(sqrt(l2sq) * sqrt(l2sq + d1sq));
  s.holds = s.lhs <= s.rhs * (1 + ten_to_minus(precision() / 2));
  return s;
}

SobolevResult sobolev_check(const MonoVec<Rational>& e) { return sobolev_check(convert<Real>(e)); }

Real integral_equation_residual(const LegVec<Real>& y, const ProblemSpec& problem, int grid) {
  if (grid < 1) throw Error(ErrorCode::InvalidArgument, "residual grid must be positive");
  problem.validate();
  const Real lambda = problem.lambda_value();
  const int q = problem.q;
  const Real tol = ten_to_minus(precision() / 2);

  // t-nodes chosen once by doubling until g(1/2) and g(1) settle
  auto make_weights = [&](int n) {
    std::vector<std::pair<Real, Real>> wy;
    for (const QuadNode& node : gauss_legendre_nodes(n)) wy.emplace_back(node.x, node.w * pow(y.evaluate(node.x), q));
    return wy;
  };
  auto g_with = [&](const std::vector<std::pair<Real, Real>>& wy, const Real& s) {
    Real acc = 0;
    for (const auto& [t, w] : wy) acc += problem.kernel.evaluate(s, t) * w;
    return acc;
  };
  int n = std::max(32, (q * static_cast<int>(y.size()) + 1) / 2 + 8);
  std::vector<std::pair<Real, Real>> wy = make_weights(n);
  for (;; n *= 2) {
    std::vector<std::pair<Real, Real>> next = make_weights(2 * n);
    Real diff = 0;
    for (const Real& s : {Real(1) / 2, Real(1)}) {
      Real a = g_with(wy, s), b = g_with(next, s);
      diff = std::max(diff, abs(a - b) / (1 + abs(b)));
    }
    wy = std::move(next);
    if (diff <= tol) break;
    if (n > 4096) {
      throw Error(ErrorCode::NonConvergedQuadrature, "kernel integral did not converge");
    }
  }

  auto rhs = [&](const Real& s) { return problem.source.evaluate(s) + lambda * g_with(wy, s); };
  const Real alpha = problem.alpha.alpha_real();
  Real worst = 0;
  for (int i = 0; i <= grid; ++i) {
    Real x = Real(i) / grid;
    Real init = 0, xp = 1;
    for (int k = 0; k < problem.alpha.m(); ++k) {
      init += problem.init_value(k) * xp / to_real(factorial(k));
      xp *= x;
    }
    Real v = abs(y.evaluate(x) - init - riemann_liouville_integral(rhs, alpha, x, tol));
    if (v > worst) worst = v;
  }
  return worst;
}

SourceSpec manufacture_source(const ExactSolution& exact, const ProblemSpec& problem) {
  // Everything is captured by value so the source outlives `problem`.
  const FracOrder order = problem.alpha;
  const Expression lambda_expr = problem.lambda;
  const int q = problem.q;
  const KernelSpec kernel = problem.kernel;
  const ExactSolution ex = exact;
  if (order.m() > ExactSolution::kMaxDerivative) {
    throw Error(ErrorCode::ValidationError, "manufactured source needs derivatives up to order " +
                                                std::to_string(order.m()));
  }
  struct Nodes {
    std::mutex mu;
    std::map<int, std::vector<std::pair<Real, Real>>> by_digits;  // (t, w y(t)^q)
  };
  auto nodes = std::make_shared<Nodes>();
  auto weights = [nodes, ex, q, kernel]() {
    std::lock_guard<std::mutex> lock(nodes->mu);
    auto it = nodes->by_digits.find(working_digits());
    if (it != nodes->by_digits.end()) return it->second;
    const Real tol = ten_to_minus(precision() / 2);
    auto make = [&](int n) {
      std::vector<std::pair<Real, Real>> wy;
      for (const QuadNode& node : gauss_legendre_nodes(n)) wy.emplace_back(node.x, node.w * pow(ex.value(node.x), q));
      return wy;
    };
    auto integral = [&](const std::vector<std::pair<Real, Real>>& wy, const Real& x) {
      Real acc = 0;
      for (const auto& [t, w] : wy) acc += kernel.evaluate(x, t) * w;
      return acc;
    };
    std::vector<std::pair<Real, Real>> wy = make(32);
    for (int n = 32;; n *= 2) {
      std::vector<std::pair<Real, Real>> next = make(2 * n);
      Real diff = 0;
      for (const Real& x : {Real(0), Real(1) / 2, Real(1)}) {
        Real b = integral(next, x);
        diff = std::max(diff, abs(integral(wy, x) - b) / (1 + abs(b)));
      }
      wy = std::move(next);
      if (diff <= tol) break;
      if (n > 2048) throw Error(ErrorCode::NonConvergedQuadrature, "manufactured source: kernel integral did not converge");
    }
    nodes->by_digits.emplace(working_digits(), wy);
    return wy;
  };
  auto f = [=](const Real& x) {
    CaputoOracleOptions opts;
    opts.derivative = [ex, order](const Real& s) { return ex.derivative(s, order.m()); };
    Real d = caputo_oracle([ex](const Real& s) { return ex.value(s); }, order, x, opts);
    Real acc = 0;
    for (const auto& [t, w] : weights()) acc += kernel.evaluate(x, t) * w;
    return d - lambda_expr.evaluate(Real(0)) * acc;
  };
  auto memo = std::make_shared<Memo>(f);
  SourceSpec s;
  s.pointwise = [memo](const Real& x) { return (*memo)(x); };
  s.manufactured = true;
  return s;
}

Real projection_error_l2(const RealFunction& f, int N) {
  LegVec<Real> c = project_function(f, N);
  auto integrand = [&](const Real& x, const Real&) {
    Real e = f(x) - c.evaluate(x);
    return e * e;
  };
  QuadratureResult r = tanh_sinh(integrand, ten_to_minus(precision()));
  if (!r.converged && r.error_estimate > ten_to_minus(precision() / 2) * abs(r.value)) {
    throw Error(ErrorCode::NonConvergedQuadrature, "projection error quadrature did not converge");
  }
  return sqrt(abs(r.value));
}

Real max_difference(const LegVec<Real>& a, const LegVec<Real>& b, int grid) {
  return sup_norm([&](const Real& x) { return a.evaluate(x) - b.evaluate(x); }, grid, nullptr);
}

const char* to_string(SweepMetric m) noexcept {
  switch (m) {
    case SweepMetric::MaxError: return "MAX_ERROR";
    case SweepMetric::IntegralResidual: return "INTEGRAL_RESIDUAL";
    case SweepMetric::SelfReference: return "SELF_REFERENCE";
  }
  return "?";
}

std::optional<SweepMetric> parse_metric(const std::string& name) {
  std::string s;
  for (char c : name) s += static_cast<char>(c == '-' ? '_' : std::toupper(static_cast<unsigned char>(c)));
  if (s == "MAX_ERROR") return SweepMetric::MaxError;
  if (s == "INTEGRAL_RESIDUAL") return SweepMetric::IntegralResidual;
  if (s == "SELF_REFERENCE") return SweepMetric::SelfReference;
  return std::nullopt;
}

std::optional<DecayFit> fit_decay(const std::vector<std::pair<int, Real>>& points) {
  std::vector<Real> n, logn, loge;
  for (const auto& [N, e] : points) {
    if (!(e > 0)) continue;
    n.push_back(Real(N));
    logn.push_back(log(Real(N)));
    loge.push_back(log(e));
  }
  if (n.size() < 3) return std::nullopt;
  DecayFit fit;
  fit.correlation_linear = pearson(n, loge);
  fit.correlation_log = pearson(logn, loge);
  if (abs(fit.correlation_linear) >= abs(fit.correlation_log)) {
    fit.kind = "exponential-like";
    fit.rate = -slope(n, loge);
  } else {
    fit.kind = "algebraic-like";
    fit.rate = -slope(logn, loge);
  }
  return fit;
}

ConvergenceReport convergence_sweep(const ProblemSpec& problem, std::vector<int> Ns, SweepMetric metric,
                                    const SweepOptions& options) {
  if (!std::is_sorted(Ns.begin(), Ns.end())) {
    throw Error(ErrorCode::InvalidArgument, "sweep degrees must be sorted ascending");
  }
  ConvergenceReport report;
  report.metric = metric;
  if (metric == SweepMetric::MaxError && !problem.exact) {
    throw Error(ErrorCode::InvalidArgument, "MAX_ERROR needs an exact solution");
  }
  std::optional<LegVec<Real>> reference;
  if (metric == SweepMetric::SelfReference) {
    report.reference_N = options.reference_N;
    SolveOptions ref_opts = options.solve;
    ref_opts.compute_errors = false;
    reference = solve(problem, options.reference_N, ref_opts).y_leg;
  }
  std::vector<std::pair<int, Real>> points;
  for (int N : Ns) {
    SweepRow row;
    row.N = N;
    const auto start = std::chrono::steady_clock::now();
    try {
      SolveOptions opts = options.solve;
      opts.compute_errors = metric == SweepMetric::MaxError;
      SolutionReport s = solve(problem, N, opts);
      row.status = to_string(s.status);
      row.iterations = static_cast<int>(s.newton_trace.size()) - 1;
      switch (metric) {
        case SweepMetric::MaxError:
          if (s.errors_vs_exact) row.value = s.errors_vs_exact->linf;
          break;
        case SweepMetric::IntegralResidual:
          row.value = integral_equation_residual(s.y_leg, problem, options.residual_grid);
          break;
        case SweepMetric::SelfReference: row.value = max_difference(s.y_leg, *reference); break;
      }
      if (row.value) points.emplace_back(N, *row.value);
    } catch (const Error& e) {
      row.status = fide::to_string(e.code());
    }
    row.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.rows.push_back(std::move(row));
  }
  report.fit = fit_decay(points);
  return report;
}

}  // namespace fide
