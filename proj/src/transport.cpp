#include "otmap/transport.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "otmap/errors.hpp"

namespace otmap {
namespace {

// Quantile floor: grid nodes never sit closer to a CDF endpoint than this,
// keeping the log-density of both measures finite at every node (and, for
// Jacobian-weighted measures, keeping nodes away from r = 0).
constexpr double kQuantileFloor = 1e-13;

int worker_count(int requested, int nodes) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  int n = static_cast<int>(hw == 0 ? 1 : hw);
  n = std::min(n, 8);
  if (nodes < 512) n = 1;
  return std::max(n, 1);
}

}  // namespace

TransportMap1D build_transport(const WeightedMeasure1D& source,
                               const WeightedMeasure1D& target, GridSpec spec,
                               TransportOptions opt) {
  if (source.jacobian_power() != target.jacobian_power())
    throw SupportMismatch("source and target carry different Jacobian weights");
  if (spec.count < 9) throw PreconditionViolated("grid needs at least 9 nodes");

  const Interval b = source.effective_bounds();
  double cover_lo = b.lo, cover_hi = b.hi;
  if (spec.span > 0.0) {
    const double center =
        std::fmin(std::fmax(source.potential().argmin, b.lo), b.hi);
    cover_lo = std::fmax(b.lo, center - spec.span);
    cover_hi = std::fmin(b.hi, center + spec.span);
  }

  // Node targets in both tail representations; each is linear in the node
  // index, so the two stay complementary to rounding.
  double u_lo = source.cdf(cover_lo, Tail::lower);
  double v_lo = source.cdf(cover_lo, Tail::upper);
  double u_hi = source.cdf(cover_hi, Tail::lower);
  double v_hi = source.cdf(cover_hi, Tail::upper);
  if (u_lo < kQuantileFloor) {
    u_lo = kQuantileFloor;
    v_lo = 1.0 - kQuantileFloor;
  }
  if (v_hi < kQuantileFloor) {
    v_hi = kQuantileFloor;
    u_hi = 1.0 - kQuantileFloor;
  }
  if (!(u_hi > u_lo))
    throw RootBracketFailure("transport grid window has no CDF extent");

  const int n = spec.count;
  TransportMap1D map(source, target);
  map.x_.assign(n, 0.0);
  map.y_.assign(n, 0.0);
  map.ld_.assign(n, 0.0);

  auto solve_node = [&](int i) {
    const double w = static_cast<double>(i) / (n - 1);
    const double u = u_lo + (u_hi - u_lo) * w;   // lower-tail target
    const double v = v_lo + (v_hi - v_lo) * w;   // upper-tail target
    const double x = (u <= 0.5) ? source.quantile(u, Tail::lower)
                                : source.quantile(v, Tail::upper);
    // Re-evaluate the achieved CDF directly at x so the target solve sees a
    // fully accurate right-hand side in the matching tail.
    const double ylow = source.cdf(x, Tail::lower);
    const double t = (ylow <= 0.5)
                         ? target.quantile(ylow, Tail::lower)
                         : target.quantile(source.cdf(x, Tail::upper),
                                           Tail::upper);
    map.x_[i] = x;
    map.y_[i] = t;
    map.ld_[i] = source.log_density(x) - target.log_density(t);
  };

  const int workers = worker_count(opt.threads, n);
  if (workers == 1) {
    for (int i = 0; i < n; ++i) solve_node(i);
  } else {
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (int w = 0; w < workers; ++w) {
      const int lo = static_cast<int>(static_cast<long>(n) * w / workers);
      const int hi = static_cast<int>(static_cast<long>(n) * (w + 1) / workers);
      pool.emplace_back([&, lo, hi] {
        try {
          for (int i = lo; i < hi; ++i) solve_node(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  // Quantile functions of distinct levels are strictly ordered; enforce the
  // strictness that floating point can lose in ultra-flat tails.
  for (int i = 1; i < n; ++i) {
    if (!(map.x_[i] > map.x_[i - 1]))
      map.x_[i] = std::nextafter(map.x_[i - 1], kInfinity);
    if (!(map.y_[i] > map.y_[i - 1]))
      map.y_[i] = std::nextafter(map.y_[i - 1], kInfinity);
  }

  std::vector<double> slopes(n);
  for (int i = 0; i < n; ++i) slopes[i] = std::exp(map.ld_[i]);
  map.interp_ = MonotoneCubic(map.x_, map.y_, std::move(slopes));
  return map;
}

double TransportMap1D::operator()(double x) const {
  const Interval s = target_.support();
  return std::fmin(std::fmax(interp_(x), s.lo), s.hi);
}

double TransportMap1D::derivative(double x) const {
  return interp_.derivative(x);
}

double TransportMap1D::log_derivative(double x) const {
  const Interval s = source_.support();
  if (!(x > s.lo) || !(x < s.hi))
    throw OutOfDomain("point outside the interior of the source support");
  return source_.log_density(x) - target_.log_density((*this)(x));
}

double log_derivative(const TransportMap1D& map, double x) {
  return map.log_derivative(x);
}

double TransportMap1D::mass_balance_residual(double x) const {
  return std::fabs(source_.cdf(x, Tail::lower) -
                   target_.cdf((*this)(x), Tail::lower));
}

CostEstimate transport_cost(const TransportMap1D& map) {
  const auto& x = map.grid();
  QuadratureOptions opt = map.source().options().quad;
  opt.rel_tol = std::fmax(opt.rel_tol, 1e-13);
  opt.abs_tol = 1e-13;
  opt.initial_intervals = 64;
  CostEstimate out;
  out.value = integrate(
      [&](double t) {
        const double d = t - map(t);
        return d * d * map.source().density(t);
      },
      x.front(), x.back(), opt);

  // Analytic tail bound: past the grid the displacement is at most
  // |t| + K with K the larger of the last map value and the target window
  // edge; the source log-density is concave with known slope there.
  const auto tail = [&](double edge, int dir) {
    const WeightedMeasure1D& src = map.source();
    const Interval w = src.effective_bounds();
    if ((dir > 0 && edge >= w.hi) || (dir < 0 && edge <= w.lo)) return 0.0;
    const Interval tw = map.target().effective_bounds();
    const double K =
        std::fmax(std::fabs(map(edge)), std::fmax(std::fabs(tw.lo), std::fabs(tw.hi)));
    double slope = dir * src.potential().deriv(edge);
    if (src.jacobian_power() > 0 && edge > 0.0)
      slope -= src.jacobian_power() / edge;
    if (!(slope > 0.0)) return kInfinity;
    const double f = src.density(edge);
    const double a = std::fabs(edge) + K;
    return f * (a * a / slope + 2.0 * a / (slope * slope) +
                2.0 / (slope * slope * slope));
  };
  out.tail_bound = tail(x.back(), +1) + tail(x.front(), -1);
  return out;
}

double relative_entropy(const WeightedMeasure1D& target,
                        const WeightedMeasure1D& source) {
  const Interval ts = target.support();
  const Interval ss = source.support();
  const auto extends_below = [](double a, double b) {
    if (b == -kInfinity) return false;
    if (a == -kInfinity) return true;
    return a < b - 1e-12 * (1.0 + std::fabs(b));
  };
  if (extends_below(ts.lo, ss.lo) || extends_below(-ts.hi, -ss.hi))
    throw SupportMismatch("target support exceeds source support");

  const Interval w = target.effective_bounds();
  QuadratureOptions opt = target.options().quad;
  opt.rel_tol = std::fmax(opt.rel_tol, 1e-13);
  opt.abs_tol = 1e-13;
  opt.initial_intervals = 64;
  const double val = integrate(
      [&](double t) {
        const double lt = target.log_density(t);
        if (lt == -kInfinity) return 0.0;
        return std::exp(lt) * (lt - source.log_density(t));
      },
      w.lo, w.hi, opt);
  return std::fmax(val, 0.0);
}

TailLimitReport tail_limit_check(const TransportMap1D& map, double j) {
  const Interval s = map.target().support();
  if (!std::isfinite(s.hi) || std::fabs(s.hi - j) > 1e-9)
    throw PreconditionViolated("target is not supported in [-j, j]");

  const auto& x = map.grid();
  const auto& y = map.values();
  const std::size_t n = x.size();
  TailLimitReport rep;
  rep.j = j;
  rep.span = 0.5 * (x.back() - x.front());
  const std::size_t decile = n / 10;
  for (std::size_t i = n - decile; i < n; ++i)
    rep.sup_deviation = std::fmax(rep.sup_deviation, std::fabs(y[i] - j));
  if (!std::isfinite(map.source().support().lo) && std::isfinite(s.lo)) {
    for (std::size_t i = 0; i < decile; ++i)
      rep.sup_deviation = std::fmax(rep.sup_deviation, std::fabs(y[i] - s.lo));
  }
  return rep;
}

double push_forward_integral(const TransportMap1D& map,
                             const std::function<double(double)>& phi) {
  const auto& x = map.grid();
  QuadratureOptions opt = map.source().options().quad;
  opt.rel_tol = std::fmax(opt.rel_tol, 1e-13);
  opt.abs_tol = 1e-12;
  opt.initial_intervals = 64;
  return integrate(
      [&](double t) { return phi(map(t)) * map.source().density(t); },
      x.front(), x.back(), opt);
}

}  // namespace otmap
