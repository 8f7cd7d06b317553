#pragma once

#include <functional>

namespace otmap {

/// Solves g(x) = target for strictly monotone g on [lo, hi], where g(lo) and
/// g(hi) bracket the target.  Safeguarded Newton: a Newton step is taken when
/// the derivative is usable and the step stays inside the current bracket,
/// otherwise the bracket is bisected.  Converges to machine precision in x.
/// Throws RootBracketFailure if the bracket is invalid.
double invert_monotone(const std::function<double(double)>& g,
                       const std::function<double(double)>& dg,
                       double target, double lo, double hi, double g_lo,
                       double g_hi, int max_iter = 200);

/// Golden-section maximizer of a unimodal f on [a, b].
double golden_section_max(const std::function<double(double)>& f, double a,
                          double b, int max_iter = 200);

}  // namespace otmap
