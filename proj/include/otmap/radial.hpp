#pragma once

#include <utility>
#include <vector>

#include "otmap/transport.hpp"

namespace otmap {

/// Reduces the n-dimensional radially symmetric pair (exp(-V(|x|)),
/// exp(-V(|x|)-q(|x|))) to weighted half-line measures with Jacobian weight
/// r^(n-1).  The induced 1-D potential V(r) - (n-1) log r is convex by
/// construction and is spot-checked on samples.
std::pair<WeightedMeasure1D, WeightedMeasure1D> reduce_to_1d(
    const Potential& radial_potential,
    const std::optional<Perturbation>& radial_perturbation, int dimension,
    MeasureOptions options = MeasureOptions::defaults());

/// An n-dimensional radial transport T(x) = profile(|x|) x/|x| assembled
/// from the weighted 1-D problem.  The dimension enters only through the
/// weight exponent; no n-dimensional arrays are ever formed.
class RadialTransport {
public:
  RadialTransport(Potential radial_potential,
                  std::optional<Perturbation> radial_perturbation,
                  int dimension, GridSpec spec = {},
                  MeasureOptions options = MeasureOptions::defaults());

  int dimension() const { return dimension_; }
  const TransportMap1D& profile() const { return profile_; }
  double q_sup_pos() const { return q_pos_; }
  double q_sup_neg() const { return q_neg_; }

  /// Profile value at radius r; linear through the origin below the first
  /// grid node.
  double profile_value(double r) const;

  std::vector<double> evaluate_map(const std::vector<double>& x) const;

  /// (radial, tangential) eigenvalues of the map gradient at radius r:
  /// (T'(r), T(r)/r).
  std::pair<double, double> gradient_eigenvalues(double r) const;

private:
  int dimension_;
  double q_pos_, q_neg_;
  TransportMap1D profile_;
};

}  // namespace otmap
