#pragma once

#include <memory>
#include <optional>

#include "otmap/potential.hpp"
#include "otmap/quadrature.hpp"

namespace otmap {

enum class Tail { lower, upper };

struct MeasureOptions {
  int panel_count = 4096;
  double tail_mass = 1e-14;  // analytic tail bound, relative to the peak scale
  QuadratureOptions quad = QuadratureOptions::defaults();
  bool validate = true;

  static MeasureOptions defaults() { return MeasureOptions{}; }
};

/// An unnormalized density exp(-V(t) - q(t)) * t^p on an interval, stored
/// together with the constant c that makes exp(c - V - q) t^p a probability
/// density.  Construction computes the quadrature window, the normalization,
/// and a panel table of partial integrals from which CDFs and quantiles are
/// evaluated; everything is immutable afterwards and cheap to copy.
///
/// The jacobian power p = n-1 carries the radial reduction weight; such
/// measures live on [0, inf).
class WeightedMeasure1D {
public:
  WeightedMeasure1D(Potential potential,
                    std::optional<Perturbation> perturbation = {},
                    int jacobian_power = 0,
                    std::optional<Interval> domain = {},
                    MeasureOptions options = MeasureOptions::defaults());

  /// Normalization constant c with integral of exp(c - V - q) t^p equal 1.
  double normalization() const;

  double density(double t) const;      // normalized
  double log_density(double t) const;  // c - V - q + p log t; -inf outside

  /// Lower tail integrates from the left end, upper from the right; the
  /// upper tail is never formed as 1 - lower.
  double cdf(double x, Tail tail) const;

  /// Inverse CDF for p in (0, 1); Tail::upper solves against the upper tail
  /// for full relative accuracy near 1.  Throws RootBracketFailure for
  /// arguments outside (0, 1).
  double quantile(double p, Tail tail) const;

  /// Mass of [-r, r], or of [0, r] for Jacobian-weighted measures.
  double ball_mass(double r) const;

  /// The window actually integrated over (declared domain cut to tails of
  /// relative mass below options.tail_mass).
  Interval effective_bounds() const;

  /// Declared domain intersected with the potential's finite support.
  Interval support() const;

  const Potential& potential() const;
  const std::optional<Perturbation>& perturbation() const;
  int jacobian_power() const;
  const MeasureOptions& options() const;

private:
  struct Table;
  std::shared_ptr<const Table> table_;
};

/// Free-function spellings of the member operations.
double normalize_constant(const WeightedMeasure1D& m);
double cdf(const WeightedMeasure1D& m, double x, Tail tail);
double ball_mass(const WeightedMeasure1D& m, double r);

/// Integral of phi against the measure over its effective bounds.
double measure_integral(const WeightedMeasure1D& m,
                        const std::function<double(double)>& phi);

}  // namespace otmap
