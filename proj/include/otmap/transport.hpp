#pragma once

#include <functional>
#include <vector>

#include "otmap/interpolation.hpp"
#include "otmap/measure.hpp"

namespace otmap {

/// Transport grid: `count` nodes placed uniformly in source-CDF space over
/// the window [argmin - span, argmin + span] (cut to the source's effective
/// bounds).  span <= 0 requests the full effective window.
struct GridSpec {
  int count = 4097;
  double span = 0.0;
};

struct TransportOptions {
  int threads = 0;  // 0 = automatic
};

/// The monotone quantile-matching map between two normalized measures,
/// stored as node values plus the closed-form log-derivative, with a
/// monotone cubic interpolant in between.  Immutable and cheap to copy.
class TransportMap1D {
public:
  const std::vector<double>& grid() const { return x_; }
  const std::vector<double>& values() const { return y_; }
  const std::vector<double>& log_deriv() const { return ld_; }

  /// Interpolated map value, clamped into the target's support.
  double operator()(double x) const;
  /// Interpolant derivative (for cross-checks; the closed form below is the
  /// authoritative derivative).
  double derivative(double x) const;

  /// Closed-form log T'(x) = log dens_src(x) - log dens_tgt(T(x)); exact at
  /// the nodes, interpolated T in between.  Throws OutOfDomain outside the
  /// interior of the source support.
  double log_derivative(double x) const;

  double mass_balance_residual(double x) const;

  const WeightedMeasure1D& source() const { return source_; }
  const WeightedMeasure1D& target() const { return target_; }

  friend TransportMap1D build_transport(const WeightedMeasure1D&,
                                        const WeightedMeasure1D&, GridSpec,
                                        TransportOptions);

private:
  TransportMap1D(WeightedMeasure1D s, WeightedMeasure1D t)
      : source_(std::move(s)), target_(std::move(t)) {}

  WeightedMeasure1D source_, target_;
  std::vector<double> x_, y_, ld_;
  MonotoneCubic interp_;
};

/// Builds the map by per-node quantile inversion: nodes in the right half
/// solve the complementary (upper tail) mass balance equation for accuracy.
/// Node solves are independent and run in parallel.
TransportMap1D build_transport(const WeightedMeasure1D& source,
                               const WeightedMeasure1D& target,
                               GridSpec spec = {}, TransportOptions opt = {});

/// Free spelling of TransportMap1D::log_derivative.
double log_derivative(const TransportMap1D& map, double x);

struct CostEstimate {
  double value = 0.0;       // quadrature over the grid span
  double tail_bound = 0.0;  // analytic bound on the mass outside
};

/// Quadratic transport cost of the map against its source measure.
CostEstimate transport_cost(const TransportMap1D& map);

/// Ent(target | source); throws SupportMismatch when the target support
/// exceeds the source support.
double relative_entropy(const WeightedMeasure1D& target,
                        const WeightedMeasure1D& source);

struct TailLimitReport {
  double span = 0.0;           // half-width of the grid actually used
  double j = 0.0;              // target support radius
  double sup_deviation = 0.0;  // sup over the outer decile of |T - j sign(x)|
};

/// Far-field check for maps onto measures supported in [-j, j]: T tends
/// to the support edge, and the deviation shrinks as the grid span grows.
TailLimitReport tail_limit_check(const TransportMap1D& map, double j);

/// Integral of phi(T(x)) against the source measure.
double push_forward_integral(const TransportMap1D& map,
                             const std::function<double(double)>& phi);

}  // namespace otmap
