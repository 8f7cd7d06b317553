#include "otmap/rootfind.hpp"

#include <cmath>

#include "otmap/errors.hpp"

namespace otmap {

double invert_monotone(const std::function<double(double)>& g,
                       const std::function<double(double)>& dg, double target,
                       double lo, double hi, double g_lo, double g_hi,
                       int max_iter) {
  if (!(lo <= hi) || !std::isfinite(target))
    throw RootBracketFailure("invalid bracket");
  const bool increasing = g_hi >= g_lo;
  const double flo = increasing ? g_lo - target : target - g_lo;
  const double fhi = increasing ? g_hi - target : target - g_hi;
  if (flo > 0.0 || fhi < 0.0)
    throw RootBracketFailure("target not bracketed");
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;

  double x = 0.5 * (lo + hi);
  for (int it = 0; it < max_iter; ++it) {
    const double fx = increasing ? g(x) - target : target - g(x);
    if (fx == 0.0) return x;
    if (fx < 0.0)
      lo = x;
    else
      hi = x;
    if (hi - lo <= 1e-15 * (1.0 + std::fabs(lo) + std::fabs(hi))) break;

    double next = 0.5 * (lo + hi);
    if (dg) {
      const double d = increasing ? dg(x) : -dg(x);
      if (std::isfinite(d) && d > 0.0) {
        const double candidate = x - fx / d;
        if (candidate > lo && candidate < hi) next = candidate;
      }
    }
    x = next;
  }
  return 0.5 * (lo + hi);
}

double golden_section_max(const std::function<double(double)>& f, double a,
                          double b, int max_iter) {
  const double inv_phi = 0.6180339887498949;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < max_iter; ++it) {
    if (b - a <= 1e-13 * (1.0 + std::fabs(a) + std::fabs(b))) break;
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace otmap
