#include "otmap/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "otmap/errors.hpp"

namespace otmap {
namespace {

// (G7, K15) nodes and weights, QUADPACK dqk15.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct PanelEstimate {
  double k15;
  double g7;
};

PanelEstimate gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);

  const double fc = f(c);
  double k15 = kWgk[7] * fc;
  double g7 = kWg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = h * kXgk[i];
    const double fsum = f(c - dx) + f(c + dx);
    k15 += kWgk[i] * fsum;
    if (i % 2 == 1) g7 += kWg[i / 2] * fsum;
  }
  return {k15 * h, g7 * h};
}

struct Segment {
  double a, b;
  double value;
  double err;
  int depth;
};

}  // namespace

QuadratureOptions QuadratureOptions::defaults() {
  static const double env_tol = [] {
    if (const char* s = std::getenv("OT_QUAD_TOL")) {
      char* end = nullptr;
      const double v = std::strtod(s, &end);
      if (end != s && v > 0.0 && v < 1.0) return v;
    }
    return 1e-14;
  }();
  QuadratureOptions opt;
  opt.rel_tol = env_tol;
  return opt;
}

QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b,
                                    const QuadratureOptions& opt) {
  QuadratureResult out;
  if (a == b) return out;
  if (!std::isfinite(a) || !std::isfinite(b))
    throw QuadratureFailure("infinite integration limits");

  const double total_len = std::fabs(b - a);
  std::vector<Segment> stack;
  auto push = [&](double lo, double hi, int depth) {
    const PanelEstimate e = gk15(f, lo, hi);
    if (!std::isfinite(e.k15))
      throw QuadratureFailure("non-finite integrand value");
    stack.push_back({lo, hi, e.k15, std::fabs(e.k15 - e.g7), depth});
    ++out.intervals;
    if (out.intervals > opt.max_intervals)
      throw QuadratureFailure("interval budget exhausted");
  };

  const int seeds = std::max(opt.initial_intervals, 1);
  for (int i = 0; i < seeds; ++i)
    push(a + (b - a) * i / seeds, a + (b - a) * (i + 1) / seeds, 0);
  double sum = 0.0, sum_comp = 0.0;  // Kahan
  double err_sum = 0.0;
  while (!stack.empty()) {
    const Segment seg = stack.back();
    stack.pop_back();
    const double local_tol =
        std::fmax(opt.rel_tol * std::fabs(seg.value),
                  opt.abs_tol * std::fabs(seg.b - seg.a) / total_len);
    if (seg.err <= local_tol || seg.depth >= opt.max_depth) {
      const double y = seg.value - sum_comp;
      const double t = sum + y;
      sum_comp = (t - sum) - y;
      sum = t;
      err_sum += seg.err;
      continue;
    }
    const double mid = 0.5 * (seg.a + seg.b);
    push(seg.a, mid, seg.depth + 1);
    push(mid, seg.b, seg.depth + 1);
  }
  out.value = sum;
  out.error_estimate = err_sum;
  return out;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& opt) {
  return integrate_adaptive(f, a, b, opt).value;
}

}  // namespace otmap
