#pragma once

#include <functional>

namespace otmap {

/// Controls for the adaptive Gauss-Kronrod integrator.
///
/// A subinterval is accepted once its local error estimate drops below
/// max(rel_tol * |local value|, abs_tol * len / total_len).  The relative
/// criterion keeps far-tail contributions accurate in a relative sense,
/// which the CDF machinery depends on; the absolute budget lets integrands
/// with sign changes (entropy, cost) terminate near their zeros.
struct QuadratureOptions {
  double rel_tol = 1e-14;
  double abs_tol = 0.0;
  int max_depth = 48;
  long max_intervals = 400000;
  // Uniform pre-split of [a, b] before refinement; symmetric and
  // antisymmetric integrands fool the depth-0 error estimate otherwise.
  int initial_intervals = 1;

  /// Library defaults; honors the OT_QUAD_TOL environment override.
  static QuadratureOptions defaults();
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long intervals = 0;
};

/// Adaptive (G7, K15) Gauss-Kronrod integration of f over the finite
/// interval [a, b].  Throws QuadratureFailure if the interval budget is
/// exhausted or the integrand returns a non-finite value.
QuadratureResult integrate_adaptive(
    const std::function<double(double)>& f, double a, double b,
    const QuadratureOptions& opt = QuadratureOptions::defaults());

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& opt = QuadratureOptions::defaults());

}  // namespace otmap
