#pragma once

// Run-precision quadrature on [0,1]: Gauss-Legendre (smooth integrands) and
// tanh-sinh (integrable endpoint singularities).

#include <cstddef>
#include <functional>
#include <vector>

#include "fide/scalar.hpp"

namespace fide {

/// A node on [0,1]. `xc` is 1 - x computed without cancellation.
struct QuadNode {
  Real x;
  Real xc;
  Real w;
};

/// n-point Gauss-Legendre rule mapped to [0,1]. Cached per (n, precision).
const std::vector<QuadNode>& gauss_legendre_nodes(int n);

/// Nodes added at tanh-sinh refinement `level` (step 2^-level). Level 0
/// holds all integer abscissae; weights exclude the step factor.
const std::vector<QuadNode>& tanh_sinh_level(int level);
int tanh_sinh_max_level() noexcept;

struct QuadratureResult {
  Real value;
  Real error_estimate;
  bool converged = false;
  int evaluations = 0;
};

/// Adaptive tanh-sinh. Converged once two successive levels differ by at
/// most `tol` (absolute). Integrand receives (x, 1 - x).
QuadratureResult tanh_sinh(const std::function<Real(const Real&, const Real&)>& f,
                           const Real& tol, int max_level = -1);

/// Gauss-Legendre with node doubling starting at n0 until |I_2n - I_n| <= tol.
QuadratureResult gauss_legendre_adaptive(const std::function<Real(const Real&)>& f,
                                         const Real& tol, int n0 = 32, int n_max = 2048);

/// Fixed Gauss-Legendre sum.
Real gauss_legendre(const std::function<Real(const Real&)>& f, int n);

/// Vector-valued tanh-sinh: integrates every component of f at once; stops
/// when the max component change between levels is <= tol.
struct VectorQuadratureResult {
  std::vector<Real> values;
  Real error_estimate;
  bool converged = false;
  int evaluations = 0;
};

VectorQuadratureResult tanh_sinh_vector(
    const std::function<void(const Real& x, const Real& xc, std::vector<Real>& out)>& f,
    std::size_t components, const Real& tol, int max_level = -1);

VectorQuadratureResult gauss_legendre_vector(
    const std::function<void(const Real& x, std::vector<Real>& out)>& f, std::size_t components,
    const Real& tol, int n0, int n_max);

}  // namespace fide
