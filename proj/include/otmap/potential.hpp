#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>

namespace otmap {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct Interval {
  double lo = -kInfinity;
  double hi = kInfinity;

  double width() const { return hi - lo; }
  bool contains(double t) const { return t >= lo && t <= hi; }
  Interval intersect(const Interval& other) const {
    return {lo > other.lo ? lo : other.lo, hi < other.hi ? hi : other.hi};
  }
};

/// A convex base potential V with declared curvature bounds
/// lambda_lo <= V'' <= lambda_hi and a declared minimum location.  The
/// declaration is trusted but spot-verified on a sample grid when a measure
/// is built from the potential (see validate_potential).
struct Potential {
  std::function<double(double)> eval;
  std::function<double(double)> deriv;
  std::function<double(double)> second_deriv;  // optional, may be empty
  double lambda_lo = 0.0;
  double lambda_hi = kInfinity;
  double argmin = 0.0;
  std::optional<Interval> finite_support;  // V = +inf outside
  bool skip_curvature_check = false;       // induced radial potentials
  std::string description;
};

/// A bounded perturbation q of the log-density; support_radius = infinity
/// flags perturbations that are merely bounded rather than compactly
/// supported.
struct Perturbation {
  std::function<double(double)> eval;
  double support_radius = kInfinity;
  double semiconvexity = 0.0;  // smallest l with q'' >= -l
  double sup_pos = 0.0;        // sup of the positive part
  double sup_neg = 0.0;        // sup of the negative part
  std::string description;

  /// The scaled perturbation t -> factor * q(t), factor >= 0.
  Perturbation scaled(double factor) const;
};

/// Restriction of V to [-j, j]: equal to V inside, +inf outside.
Potential truncate(const Potential& potential, double j);

/// Spot checks the declared curvature bounds and minimum on a 1000-point
/// grid inside `window`; throws InvalidDeclaration on violation beyond the
/// declared tolerance.
void validate_potential(const Potential& potential, const Interval& window,
                        double tolerance = 1e-6);

/// Cross-checks declared sup-norms and compact support on a 4096-point grid.
void validate_perturbation(const Perturbation& q, const Interval& window,
                           double tolerance = 1e-6);

}  // namespace otmap
