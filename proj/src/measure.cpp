#include "otmap/measure.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <vector>

#include "otmap/errors.hpp"
#include "otmap/rootfind.hpp"

namespace otmap {

struct WeightedMeasure1D::Table {
  Potential pot;
  std::optional<Perturbation> pert;
  int power = 0;
  Interval domain;       // declared domain int. finite support
  MeasureOptions opt;

  double lo = 0.0, hi = 0.0;  // quadrature window
  std::vector<double> edges;  // panel edges, size P+1
  std::vector<double> prefix; // prefix sums of shifted panel integrals
  std::vector<double> suffix; // suffix sums
  double shift = 0.0;         // log-density shift (coarse peak)
  double total = 0.0;         // integral of shifted density over [lo, hi]
  double c = 0.0;             // normalization constant

  double raw_log(double t) const {
    if (t < domain.lo || t > domain.hi) return -kInfinity;
    double v = -pot.eval(t);
    if (pert) v -= pert->eval(t);
    if (power > 0) {
      if (t <= 0.0) return -kInfinity;
      v += power * std::log(t);
    }
    if (std::isnan(v) || v == kInfinity)
      throw NonFiniteDensity("log density not finite from above");
    return v;
  }

  double shifted_density(double t) const {
    return std::exp(raw_log(t) - shift);
  }

  std::function<double(double)> shifted() const {
    return [this](double t) { return shifted_density(t); };
  }

  // Panel index for x in [lo, hi].
  std::size_t panel(double x) const {
    const auto it = std::upper_bound(edges.begin(), edges.end(), x);
    std::size_t k = static_cast<std::size_t>(it - edges.begin());
    if (k == 0) return 0;
    if (k >= edges.size()) return edges.size() - 2;
    return k - 1;
  }

  double coarse_log_peak(double a, double b) const {
    double best = -kInfinity;
    const int n = 128;
    for (int i = 0; i <= n; ++i) {
      const double x = a + (b - a) * i / n;
      best = std::fmax(best, raw_log(x));
    }
    return best;
  }

  // Extends the quadrature window in one direction until the analytic tail
  // bound drops below tail_mass relative to the peak density.  For a convex
  // negative log-density l with l'(t) = m > 0 the tail integral is at most
  // exp(-l(t)) / m; the bounded perturbation contributes at most
  // exp(sup_neg).
  double extend_tail(double base, int dir, double q_sup_neg) const {
    const double log_target = std::log(opt.tail_mass);
    for (int k = 0; k <= 60; ++k) {
      const double x = base + dir * std::ldexp(1.0, k);
      if (power > 0 && x <= 0.0) continue;
      double slope = dir * pot.deriv(x);
      if (power > 0) slope -= power / x;
      if (!(slope > 0.0)) continue;
      const double log_tail = -pot.eval(x) +
                              (power > 0 ? power * std::log(x) : 0.0) +
                              q_sup_neg - std::log(slope);
      const double peak =
          coarse_log_peak(dir > 0 ? base : x, dir > 0 ? x : base);
      if (log_tail <= log_target + peak) return x;
    }
    throw NonIntegrable(
        "tail of exp(-V - q) t^p does not decay; lambda = 0 with no finite "
        "support?");
  }
};

WeightedMeasure1D::WeightedMeasure1D(Potential potential,
                                     std::optional<Perturbation> perturbation,
                                     int jacobian_power,
                                     std::optional<Interval> domain,
                                     MeasureOptions options) {
  if (jacobian_power < 0)
    throw InvalidDimension("jacobian power must be nonnegative");

  auto table = std::make_shared<Table>();
  table->pot = std::move(potential);
  table->pert = std::move(perturbation);
  table->power = jacobian_power;
  table->opt = options;

  Interval dom = domain ? *domain
                        : (jacobian_power > 0 ? Interval{0.0, kInfinity}
                                              : Interval{});
  if (table->pot.finite_support) dom = dom.intersect(*table->pot.finite_support);
  if (jacobian_power > 0) dom.lo = std::fmax(dom.lo, 0.0);
  if (!(dom.hi > dom.lo)) throw NonIntegrable("empty support");
  table->domain = dom;

  const double q_sup_neg = table->pert ? table->pert->sup_neg : 0.0;
  const double base =
      std::fmin(std::fmax(table->pot.argmin, dom.lo), dom.hi);
  table->lo = std::isfinite(dom.lo) ? dom.lo
                                    : table->extend_tail(base, -1, q_sup_neg);
  table->hi = std::isfinite(dom.hi) ? dom.hi
                                    : table->extend_tail(base, +1, q_sup_neg);
  if (!(table->hi > table->lo)) throw NonIntegrable("degenerate window");

  if (options.validate) {
    validate_potential(table->pot, {table->lo, table->hi});
    if (table->pert)
      validate_perturbation(*table->pert, {table->lo, table->hi});
  }

  // Panel edges: uniform plus the structural breakpoints, so adaptivity
  // never straddles a kink.
  const int P = std::max(options.panel_count, 16);
  std::vector<double>& edges = table->edges;
  edges.reserve(P + 8);
  for (int i = 0; i <= P; ++i)
    edges.push_back(table->lo + (table->hi - table->lo) * i / P);
  auto add_break = [&](double x) {
    if (x > table->lo && x < table->hi) edges.push_back(x);
  };
  add_break(table->pot.argmin);
  add_break(0.0);
  if (table->pert && std::isfinite(table->pert->support_radius)) {
    add_break(-table->pert->support_radius);
    add_break(table->pert->support_radius);
  }
  std::sort(edges.begin(), edges.end());
  const double min_gap = (table->hi - table->lo) * 1e-12;
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [min_gap](double a, double b) {
                            return std::fabs(b - a) < min_gap;
                          }),
              edges.end());

  table->shift = -kInfinity;
  for (double e : edges) table->shift = std::fmax(table->shift, table->raw_log(e));
  for (std::size_t i = 0; i + 1 < edges.size(); ++i)
    table->shift = std::fmax(table->shift,
                             table->raw_log(0.5 * (edges[i] + edges[i + 1])));
  if (!std::isfinite(table->shift))
    throw NonIntegrable("density vanishes identically on the window");

  const std::size_t n_panels = edges.size() - 1;
  table->prefix.assign(n_panels + 1, 0.0);
  table->suffix.assign(n_panels + 1, 0.0);
  std::vector<double> panels(n_panels, 0.0);
  double err_sum = 0.0;
  const auto f = table->shifted();
  for (std::size_t i = 0; i < n_panels; ++i) {
    const QuadratureResult r =
        integrate_adaptive(f, edges[i], edges[i + 1], options.quad);
    panels[i] = r.value;
    err_sum += r.error_estimate;
  }
  {
    double s = 0.0, comp = 0.0;
    for (std::size_t i = 0; i < n_panels; ++i) {
      const double y = panels[i] - comp;
      const double t = s + y;
      comp = (t - s) - y;
      s = t;
      table->prefix[i + 1] = s;
    }
    table->total = s;
    s = 0.0;
    comp = 0.0;
    for (std::size_t i = n_panels; i-- > 0;) {
      const double y = panels[i] - comp;
      const double t = s + y;
      comp = (t - s) - y;
      s = t;
      table->suffix[i] = s;
    }
  }
  if (!(table->total > 0.0) || !std::isfinite(table->total))
    throw NonIntegrable("normalization integral is not positive and finite");
  if (err_sum > 1e-10 * table->total)
    throw QuadratureFailure("panel error estimate exceeds the budget");

  table->c = -(table->shift + std::log(table->total));
  table_ = std::move(table);
}

double WeightedMeasure1D::normalization() const { return table_->c; }

double WeightedMeasure1D::log_density(double t) const {
  return table_->c + table_->raw_log(t);
}

double WeightedMeasure1D::density(double t) const {
  const double l = log_density(t);
  return l == -kInfinity ? 0.0 : std::exp(l);
}

Interval WeightedMeasure1D::effective_bounds() const {
  return {table_->lo, table_->hi};
}

Interval WeightedMeasure1D::support() const { return table_->domain; }

const Potential& WeightedMeasure1D::potential() const { return table_->pot; }

const std::optional<Perturbation>& WeightedMeasure1D::perturbation() const {
  return table_->pert;
}

int WeightedMeasure1D::jacobian_power() const { return table_->power; }

const MeasureOptions& WeightedMeasure1D::options() const { return table_->opt; }

double WeightedMeasure1D::cdf(double x, Tail tail) const {
  const Table& t = *table_;
  if (tail == Tail::lower) {
    if (x <= t.lo) return 0.0;
    if (x >= t.hi) return 1.0;
    const std::size_t k = t.panel(x);
    const double part = integrate(t.shifted(), t.edges[k], x, t.opt.quad);
    return std::clamp((t.prefix[k] + part) / t.total, 0.0, 1.0);
  }
  if (x <= t.lo) return 1.0;
  if (x >= t.hi) return 0.0;
  const std::size_t k = t.panel(x);
  const double part = integrate(t.shifted(), x, t.edges[k + 1], t.opt.quad);
  return std::clamp((t.suffix[k + 1] + part) / t.total, 0.0, 1.0);
}

double WeightedMeasure1D::quantile(double p, Tail tail) const {
  if (!std::isfinite(p) || !(p > 0.0) || !(p < 1.0)) {
    std::ostringstream oss;
    oss << "quantile argument " << p << " outside (0, 1)";
    throw RootBracketFailure(oss.str());
  }
  const Table& t = *table_;
  const double target = p * t.total;
  const auto f = t.shifted();
  if (tail == Tail::lower) {
    auto it = std::upper_bound(t.prefix.begin(), t.prefix.end(), target);
    std::size_t k = static_cast<std::size_t>(it - t.prefix.begin());
    k = (k == 0) ? 0 : std::min(k - 1, t.prefix.size() - 2);
    const double a = t.edges[k], b = t.edges[k + 1];
    const auto g = [&](double x) {
      return t.prefix[k] + integrate(f, a, x, t.opt.quad);
    };
    return invert_monotone(g, f, target, a, b, t.prefix[k], t.prefix[k + 1]);
  }
  // Upper tail: the suffix array decreases from total to 0.
  std::size_t lo = 0, hi = t.suffix.size() - 1;
  while (lo + 1 < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (t.suffix[mid] >= target)
      lo = mid;
    else
      hi = mid;
  }
  const std::size_t k = lo;
  const double a = t.edges[k], b = t.edges[k + 1];
  const auto g = [&](double x) {
    return t.suffix[k + 1] + integrate(f, x, b, t.opt.quad);
  };
  return invert_monotone(g, f, target, a, b, t.suffix[k], t.suffix[k + 1]);
}

double WeightedMeasure1D::ball_mass(double r) const {
  if (std::isnan(r)) throw PreconditionViolated("ball radius is NaN");
  if (r <= 0.0) return 0.0;
  if (r == kInfinity) return 1.0;
  if (table_->power > 0) return cdf(r, Tail::lower);
  const double m = 1.0 - cdf(r, Tail::upper) - cdf(-r, Tail::lower);
  return std::clamp(m, 0.0, 1.0);
}

double normalize_constant(const WeightedMeasure1D& m) {
  return m.normalization();
}

double cdf(const WeightedMeasure1D& m, double x, Tail tail) {
  return m.cdf(x, tail);
}

double ball_mass(const WeightedMeasure1D& m, double r) {
  return m.ball_mass(r);
}

double measure_integral(const WeightedMeasure1D& m,
                        const std::function<double(double)>& phi) {
  const Interval w = m.effective_bounds();
  QuadratureOptions opt = m.options().quad;
  opt.rel_tol = std::fmax(opt.rel_tol, 1e-13);
  opt.abs_tol = 1e-12;
  opt.initial_intervals = 64;
  return integrate([&](double t) { return phi(t) * m.density(t); }, w.lo, w.hi,
                   opt);
}

}  // namespace otmap
