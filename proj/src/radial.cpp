#include "otmap/radial.hpp"

#include <cmath>

#include "otmap/errors.hpp"

namespace otmap {
namespace {

WeightedMeasure1D make_radial_measure(const Potential& vbar,
                                      const std::optional<Perturbation>& qbar,
                                      int n, const MeasureOptions& opt) {
  Potential p = vbar;
  p.argmin = std::fmax(vbar.argmin, 0.0);
  return WeightedMeasure1D(std::move(p), qbar, n - 1, Interval{0.0, kInfinity},
                           opt);
}

// The induced potential V(r) - (n-1) log r gains curvature (n-1)/r^2 > 0;
// a finite-difference scan documents that no convexity is lost in the
// reduction.
void check_induced_convexity(const WeightedMeasure1D& m) {
  const Interval w = m.effective_bounds();
  const int p = m.jacobian_power();
  const auto induced = [&](double r) {
    return m.potential().eval(r) - p * std::log(r);
  };
  const double lo = std::fmax(w.lo, 1e-3 * (w.hi - w.lo));
  const int samples = 64;
  for (int i = 1; i < samples; ++i) {
    const double r = lo + (w.hi - lo) * i / samples;
    const double h = 1e-4 * std::fmax(1.0, r);
    const double curv = (induced(r - h) - 2.0 * induced(r) + induced(r + h)) /
                        (h * h);
    if (curv < -1e-5)
      throw InvalidDeclaration("induced radial potential not convex");
  }
}

}  // namespace

std::pair<WeightedMeasure1D, WeightedMeasure1D> reduce_to_1d(
    const Potential& radial_potential,
    const std::optional<Perturbation>& radial_perturbation, int dimension,
    MeasureOptions options) {
  if (dimension < 1) throw InvalidDimension("dimension must be >= 1");
  WeightedMeasure1D source =
      make_radial_measure(radial_potential, std::nullopt, dimension, options);
  WeightedMeasure1D target = make_radial_measure(
      radial_potential, radial_perturbation, dimension, options);
  check_induced_convexity(source);
  return {std::move(source), std::move(target)};
}

RadialTransport::RadialTransport(Potential radial_potential,
                                 std::optional<Perturbation> radial_perturbation,
                                 int dimension, GridSpec spec,
                                 MeasureOptions options)
    : dimension_(dimension),
      q_pos_(radial_perturbation ? radial_perturbation->sup_pos : 0.0),
      q_neg_(radial_perturbation ? radial_perturbation->sup_neg : 0.0),
      profile_([&] {
        auto pair = reduce_to_1d(radial_potential, radial_perturbation,
                                 dimension, options);
        return build_transport(pair.first, pair.second, spec);
      }()) {}

double RadialTransport::profile_value(double r) const {
  if (r <= 0.0) return 0.0;
  const double r0 = profile_.grid().front();
  if (r < r0) return r * (profile_.values().front() / r0);
  return profile_(r);
}

std::vector<double> RadialTransport::evaluate_map(
    const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != dimension_)
    throw InvalidDimension("point dimension does not match the transport");
  double r2 = 0.0;
  for (double xi : x) r2 += xi * xi;
  const double r = std::sqrt(r2);
  std::vector<double> out(x.size(), 0.0);
  if (r == 0.0) return out;
  const double scale = profile_value(r) / r;
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = scale * x[i];
  return out;
}

std::pair<double, double> RadialTransport::gradient_eigenvalues(
    double r) const {
  if (!(r > 0.0)) throw PreconditionViolated("radius must be positive");
  const double r0 = profile_.grid().front();
  double radial;
  if (r >= r0) {
    radial = std::exp(profile_.log_derivative(r));
  } else {
    // Linear extrapolation of log T' to the origin from the first two nodes.
    const auto& g = profile_.grid();
    const auto& ld = profile_.log_deriv();
    const double slope = (ld[1] - ld[0]) / (g[1] - g[0]);
    radial = std::exp(ld[0] + slope * (r - g[0]));
  }
  const double tangential = profile_value(r) / r;
  return {radial, tangential};
}

}  // namespace otmap
