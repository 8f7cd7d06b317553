#include "otmap/potential.hpp"

#include <cmath>
#include <sstream>

#include "otmap/errors.hpp"

namespace otmap {

Perturbation Perturbation::scaled(double factor) const {
  if (!(factor >= 0.0))
    throw PreconditionViolated("perturbation scale factor must be >= 0");
  Perturbation out = *this;
  auto f = eval;
  out.eval = [f, factor](double t) { return factor * f(t); };
  out.sup_pos = factor * sup_pos;
  out.sup_neg = factor * sup_neg;
  out.semiconvexity = factor * semiconvexity;
  std::ostringstream oss;
  oss << factor << "*(" << description << ")";
  out.description = oss.str();
  return out;
}

Potential truncate(const Potential& potential, double j) {
  if (!(j > 0.0)) throw PreconditionViolated("truncation radius must be > 0");
  Potential out = potential;
  const Interval ball{-j, j};
  out.finite_support = potential.finite_support
                           ? potential.finite_support->intersect(ball)
                           : ball;
  out.argmin = std::fmin(std::fmax(potential.argmin, out.finite_support->lo),
                         out.finite_support->hi);
  out.description = potential.description + " | truncated";
  return out;
}

void validate_potential(const Potential& potential, const Interval& window,
                        double tolerance) {
  if (!potential.eval || !potential.deriv)
    throw InvalidDeclaration("potential requires eval and deriv handles");
  if (!(potential.lambda_lo >= 0.0) ||
      !(potential.lambda_hi >= potential.lambda_lo))
    throw InvalidDeclaration("potential curvature bounds must satisfy 0 <= lambda <= Lambda");
  if (potential.skip_curvature_check) return;

  const int n = 1000;
  const double lo = window.lo, hi = window.hi;
  if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) return;
  const double v_min = potential.eval(potential.argmin);
  const double scale = std::fmax(1.0, std::isfinite(potential.lambda_hi)
                                          ? potential.lambda_hi
                                          : potential.lambda_lo);
  for (int i = 0; i <= n; ++i) {
    const double x = lo + (hi - lo) * i / n;
    double curv;
    if (potential.second_deriv) {
      curv = potential.second_deriv(x);
    } else {
      const double h = 5e-4 * std::fmax(1.0, std::fabs(x));
      curv = (potential.eval(x - h) - 2.0 * potential.eval(x) +
              potential.eval(x + h)) /
             (h * h);
    }
    if (!std::isfinite(curv))
      throw InvalidDeclaration("non-finite curvature sample");
    if (curv < potential.lambda_lo - tolerance * scale ||
        curv > potential.lambda_hi + tolerance * scale) {
      std::ostringstream oss;
      oss << "curvature " << curv << " at x=" << x
          << " violates declared [" << potential.lambda_lo << ", "
          << potential.lambda_hi << "]";
      throw InvalidDeclaration(oss.str());
    }
    if (potential.eval(x) < v_min - 1e-9 * std::fmax(1.0, std::fabs(v_min))) {
      std::ostringstream oss;
      oss << "eval(" << x << ") below declared minimum at argmin="
          << potential.argmin;
      throw InvalidDeclaration(oss.str());
    }
  }
}

void validate_perturbation(const Perturbation& q, const Interval& window,
                           double tolerance) {
  if (!q.eval) throw InvalidDeclaration("perturbation requires eval handle");
  if (!(q.sup_pos >= 0.0) || !(q.sup_neg >= 0.0) || !(q.semiconvexity >= 0.0))
    throw InvalidDeclaration("perturbation norms must be nonnegative");

  double lo = window.lo, hi = window.hi;
  if (std::isfinite(q.support_radius)) {
    // Sample slightly past the declared support to catch leakage.
    lo = std::fmax(lo, -1.25 * q.support_radius);
    hi = std::fmin(hi, 1.25 * q.support_radius);
  }
  if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) return;

  const int n = 4096;
  for (int i = 0; i <= n; ++i) {
    const double t = lo + (hi - lo) * i / n;
    const double v = q.eval(t);
    if (!std::isfinite(v))
      throw InvalidDeclaration("non-finite perturbation sample");
    if (std::fabs(t) > q.support_radius && std::fabs(v) > 1e-10)
      throw InvalidDeclaration("perturbation nonzero outside declared support");
    if (v > q.sup_pos + tolerance)
      throw InvalidDeclaration("positive part exceeds declared sup norm");
    if (-v > q.sup_neg + tolerance)
      throw InvalidDeclaration("negative part exceeds declared sup norm");
  }
}

}  // namespace otmap
