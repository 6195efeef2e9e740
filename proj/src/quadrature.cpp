#include "fide/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

namespace fide {
namespace {

using boost::multiprecision::abs;
using boost::multiprecision::cosh;
using boost::multiprecision::exp;
using boost::multiprecision::sinh;

std::vector<QuadNode> compute_gauss_legendre(int n) {
  // Newton on P_n(t), t in [-1,1], then map x = (1+t)/2.
  std::vector<QuadNode> nodes(static_cast<std::size_t>(n));
  const Real tol = ten_to_minus(working_digits() - 5);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    Real t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    Real dp;
    for (int iter = 0; iter < 100; ++iter) {
      Real p0 = 1;
      Real p1 = t;
      for (int k = 2; k <= n; ++k) {
        Real p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = std::move(p1);
        p1 = std::move(p2);
      }
      // p1 = P_n, p0 = P_{n-1}
      dp = n * (t * p1 - p0) / (t * t - 1);
      Real delta = p1 / dp;
      t -= delta;
      if (abs(delta) <= tol) {
        if (iter > 0) break;
      }
    }
    {
      Real p0 = 1;
      Real p1 = t;
      for (int k = 2; k <= n; ++k) {
        Real p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = std::move(p1);
        p1 = std::move(p2);
      }
      dp = n * (t * p1 - p0) / (t * t - 1);
    }
    Real w = 1 / ((1 - t * t) * dp * dp);  // 2/(..) halved by the map
    // t > 0 here; mirror node at -t.
    Real hi = (1 + t) / 2;
    Real lo = (1 - t) / 2;
    nodes[static_cast<std::size_t>(i)] = QuadNode{lo, hi, w};
    nodes[static_cast<std::size_t>(n - 1 - i)] = QuadNode{hi, lo, w};
  }
  return nodes;
}

double tanh_sinh_tmax() {
  // x_min ~ exp(-pi sinh t). Pushed far below 10^-digits so that the tail of
  // x^(-3/4)-type singularities, ~ x_min^(1/4), is still negligible.
  const double d = 8.0 * (working_digits() + 5);
  return std::asinh((d * std::log(10.0) + 5.0) / M_PI);
}

std::vector<QuadNode> compute_tanh_sinh_level(int level) {
  std::vector<QuadNode> nodes;
  const double tmax = tanh_sinh_tmax();
  const Real h = ten_to_minus(0) / Real(1 << level);
  const long long kmax = static_cast<long long>(std::ceil(tmax * (1 << level)));
  const Real half_pi = pi() / 2;
  auto push = [&](const Real& t) {
    Real u = half_pi * sinh(t);
    Real e = exp(-2 * u);
    Real x = 1 / (1 + e);
    Real xc = e / (1 + e);
    Real w = pi() * cosh(t) * x * xc;
    nodes.push_back(QuadNode{x, xc, w});
  };
  for (long long k = (level == 0 ? 0 : 1); k <= kmax; k += (level == 0 ? 1 : 2)) {
    Real t = h * Real(k);
    push(t);
    if (k != 0) push(-t);
  }
  return nodes;
}

template <class Key, class Value, class Make>
const Value& cached(std::map<Key, std::unique_ptr<Value>>& cache, std::mutex& mu, const Key& key,
                    Make make) {
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, std::make_unique<Value>(make())).first;
  }
  return *it->second;
}

}  // namespace

const std::vector<QuadNode>& gauss_legendre_nodes(int n) {
  static std::map<std::pair<int, int>, std::unique_ptr<std::vector<QuadNode>>> cache;
  static std::mutex mu;
  return cached(cache, mu, std::make_pair(n, working_digits()),
                [n] { return compute_gauss_legendre(n); });
}

int tanh_sinh_max_level() noexcept {
  // Each level roughly doubles the number of correct digits; allow a few
  // levels beyond the nominal requirement for singular integrands.
  int level = 4;
  while ((10 << (level - 4)) < working_digits()) ++level;
  return level + 3;
}

const std::vector<QuadNode>& tanh_sinh_level(int level) {
  static std::map<std::pair<int, int>, std::unique_ptr<std::vector<QuadNode>>> cache;
  static std::mutex mu;
  return cached(cache, mu, std::make_pair(level, working_digits()),
                [level] { return compute_tanh_sinh_level(level); });
}

QuadratureResult tanh_sinh(const std::function<Real(const Real&, const Real&)>& f,
                           const Real& tol, int max_level) {
  auto vf = [&f](const Real& x, const Real& xc, std::vector<Real>& out) { out[0] = f(x, xc); };
  VectorQuadratureResult r = tanh_sinh_vector(vf, 1, tol, max_level);
  return QuadratureResult{r.values[0], r.error_estimate, r.converged, r.evaluations};
}

VectorQuadratureResult tanh_sinh_vector(
    const std::function<void(const Real& x, const Real& xc, std::vector<Real>& out)>& f,
    std::size_t components, const Real& tol, int max_level) {
  if (max_level < 0) max_level = tanh_sinh_max_level();
  VectorQuadratureResult result;
  std::vector<Real> sum(components, Real(0));
  std::vector<Real> previous(components, Real(0));
  std::vector<Real> value(components, Real(0));
  std::vector<Real> scratch(components, Real(0));
  for (int level = 0; level <= max_level; ++level) {
    for (const QuadNode& node : tanh_sinh_level(level)) {
      f(node.x, node.xc, scratch);
      ++result.evaluations;
      for (std::size_t c = 0; c < components; ++c) sum[c] += node.w * scratch[c];
    }
    const Real h = Real(1) / Real(1 << level);
    Real diff = 0;
    for (std::size_t c = 0; c < components; ++c) {
      value[c] = sum[c] * h;
      Real d = abs(value[c] - previous[c]);
      if (d > diff) diff = d;
      previous[c] = value[c];
    }
    result.error_estimate = diff;
    if (level >= 3 && diff <= tol) {
      result.converged = true;
      break;
    }
  }
  result.values = std::move(value);
  return result;
}

Real gauss_legendre(const std::function<Real(const Real&)>& f, int n) {
  Real s = 0;
  for (const QuadNode& node : gauss_legendre_nodes(n)) s += node.w * f(node.x);
  return s;
}

VectorQuadratureResult gauss_legendre_vector(
    const std::function<void(const Real& x, std::vector<Real>& out)>& f, std::size_t components,
    const Real& tol, int n0, int n_max) {
  VectorQuadratureResult result;
  std::vector<Real> previous;
  std::vector<Real> scratch(components, Real(0));
  for (int n = n0; n <= n_max; n *= 2) {
    std::vector<Real> value(components, Real(0));
    for (const QuadNode& node : gauss_legendre_nodes(n)) {
      f(node.x, scratch);
      ++result.evaluations;
      for (std::size_t c = 0; c < components; ++c) value[c] += node.w * scratch[c];
    }
    if (!previous.empty()) {
      Real diff = 0;
      for (std::size_t c = 0; c < components; ++c) {
        Real d = abs(value[c] - previous[c]);
        if (d > diff) diff = d;
      }
      result.error_estimate = diff;
      if (diff <= tol) {
        result.values = std::move(value);
        result.converged = true;
        return result;
      }
    }
    previous = std::move(value);
  }
  result.values = std::move(previous);
  return result;
}

QuadratureResult gauss_legendre_adaptive(const std::function<Real(const Real&)>& f,
                                         const Real& tol, int n0, int n_max) {
  auto vf = [&f](const Real& x, std::vector<Real>& out) { out[0] = f(x); };
  VectorQuadratureResult r = gauss_legendre_vector(vf, 1, tol, n0, n_max);
  return QuadratureResult{r.values[0], r.error_estimate, r.converged, r.evaluations};
}

}  // namespace fide
