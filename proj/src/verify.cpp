#include "otmap/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "otmap/catalog.hpp"
#include "otmap/errors.hpp"
#include "otmap/rootfind.hpp"

namespace otmap {
namespace {

double sup_norm_sum(const Perturbation& q) { return q.sup_pos + q.sup_neg; }

double sup_norm(const Perturbation& q) { return std::fmax(q.sup_pos, q.sup_neg); }

// Refines an extremum of f over the grid by golden-section search around the
// arg-max node.
double refine_max(const std::vector<double>& x, const std::vector<double>& fx,
                  const std::function<double(double)>& f) {
  std::size_t j = 0;
  for (std::size_t i = 1; i < fx.size(); ++i)
    if (fx[i] > fx[j]) j = i;
  double best = fx[j];
  const std::size_t lo = j > 0 ? j - 1 : j;
  const std::size_t hi = j + 1 < x.size() ? j + 1 : j;
  if (hi > lo) {
    const double xs = golden_section_max(f, x[lo], x[hi]);
    best = std::fmax(best, f(xs));
  }
  return best;
}

}  // namespace

nlohmann::ordered_json VerificationOutcome::to_json() const {
  nlohmann::ordered_json j;
  j["claim"] = claim;
  j["measured"] = measured;
  j["bound"] = bound;
  j["margin"] = margin;
  j["tolerance"] = tolerance;
  j["passed"] = passed;
  nlohmann::ordered_json meta;
  for (const auto& [k, v] : metadata) meta[k] = v;
  j["metadata"] = meta;
  return j;
}

VerificationOutcome make_outcome(std::string claim, double measured,
                                 double bound, double tolerance) {
  VerificationOutcome out;
  out.claim = std::move(claim);
  out.measured = measured;
  out.bound = bound;
  out.margin = bound - measured;
  out.tolerance = tolerance;
  out.passed = measured <= bound + tolerance;
  return out;
}

double lipschitz_estimate(const TransportMap1D& map) {
  const auto& x = map.grid();
  const auto& ld = map.log_deriv();
  const double peak = refine_max(
      x, ld, [&](double t) { return map.log_derivative(t); });
  return std::exp(peak);
}

VerificationOutcome check_theorem_1_2(const Potential& V, const Perturbation& q,
                                      GridSpec spec) {
  WeightedMeasure1D source(V);
  WeightedMeasure1D target(V, q);
  const TransportMap1D map = build_transport(source, target, spec);

  const auto& x = map.grid();
  std::vector<double> abs_ld(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    abs_ld[i] = std::fabs(map.log_deriv()[i]);
  const double measured = refine_max(
      x, abs_ld, [&](double t) { return std::fabs(map.log_derivative(t)); });

  auto out = make_outcome("thm12: sup |log T'| <= sup q+ + sup q- [" +
                              V.description + ", " + q.description + "]",
                          measured, sup_norm_sum(q), 1e-8);
  out.metadata["grid"] = static_cast<double>(x.size());
  out.metadata["sup_pos"] = q.sup_pos;
  out.metadata["sup_neg"] = q.sup_neg;
  return out;
}

VerificationOutcome check_theorem_1_3(const Potential& V_radial,
                                      const Perturbation& q_radial, int n,
                                      GridSpec spec) {
  const RadialTransport rt(V_radial, q_radial, n, spec);
  const double r_max = rt.profile().grid().back();
  double measured = 0.0;
  const int samples = 1000;
  for (int k = 1; k <= samples; ++k) {
    const double r = r_max * k / samples;
    const auto [radial, tangential] = rt.gradient_eigenvalues(r);
    measured = std::fmax(measured, std::fabs(std::log(radial)));
    measured = std::fmax(measured, std::fabs(std::log(tangential)));
  }
  auto out = make_outcome(
      "thm13: gradient eigenvalues within [e^-s, e^s], n = " +
          std::to_string(n) + " [" + V_radial.description + ", " +
          q_radial.description + "]",
      measured, sup_norm_sum(q_radial), 1e-8);
  out.metadata["n"] = n;
  out.metadata["radii"] = samples;
  return out;
}

HProfile pogorelov_h_profile(const TransportMap1D& map, const PsiBar& psi) {
  HProfile prof;
  prof.x = map.grid();
  prof.h.resize(prof.x.size());
  prof.log_max_h = -kInfinity;
  for (std::size_t i = 0; i < prof.x.size(); ++i) {
    const double log_h =
        map.log_deriv()[i] + psi.psi(std::fabs(map.values()[i]));
    prof.h[i] = std::exp(log_h);
    prof.log_max_h = std::fmax(prof.log_max_h, log_h);
  }
  prof.max_h = std::exp(prof.log_max_h);
  return prof;
}

VerificationOutcome check_pogorelov(const Potential& V, const Perturbation& q,
                                    GridSpec spec) {
  PogorelovParams params;
  params.R = q.support_radius;
  params.lambda = V.lambda_lo;
  params.Lambda = V.lambda_hi;
  params.lambda_q = q.semiconvexity;
  const BoundReport report = theorem_1_1_constant(params);
  const PsiBar psi = PsiBar::build(params);

  WeightedMeasure1D source(V);
  WeightedMeasure1D target(V, q);
  const TransportMap1D map = build_transport(source, target, spec);
  const HProfile prof = pogorelov_h_profile(map, psi);

  // Compared in log space so overflowing theorem constants stay usable.
  auto out = make_outcome("pogorelov: log max h <= log final_C [" +
                              V.description + ", " + q.description + "]",
                          prof.log_max_h, report.log_final_C, 1e-8);
  out.metadata["max_h"] = prof.max_h;
  if (std::isfinite(report.final_C)) out.metadata["final_C"] = report.final_C;
  out.metadata["lambda_q"] = params.lambda_q;
  return out;
}

VerificationOutcome check_lemma_5_1(const Potential& V, std::uint64_t seed) {
  WeightedMeasure1D m(V);
  const double x0 = V.argmin;
  const double left = m.quantile(1e-7, Tail::lower);
  const double right = m.quantile(1e-7, Tail::upper);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  double measured = -kInfinity;
  const int pairs = 500;
  for (int k = 0; k < pairs; ++k) {
    // Lower tail: x <= y <= x0.
    double x = left + (x0 - left) * unif(rng);
    double y = left + (x0 - left) * unif(rng);
    if (x > y) std::swap(x, y);
    const double lhs = V.eval(x) - V.eval(y);
    const double rhs = std::log(m.cdf(y, Tail::lower)) -
                       std::log(m.cdf(x, Tail::lower));
    measured = std::fmax(measured, lhs - rhs);
  }
  for (int k = 0; k < pairs; ++k) {
    // Upper tail: x0 <= x <= y.
    double x = x0 + (right - x0) * unif(rng);
    double y = x0 + (right - x0) * unif(rng);
    if (x > y) std::swap(x, y);
    const double lhs = V.eval(x) - V.eval(y);
    const double rhs = std::log(m.cdf(y, Tail::upper)) -
                       std::log(m.cdf(x, Tail::upper));
    measured = std::fmax(measured, rhs - lhs);
  }
  auto out = make_outcome(
      "lemma51: log Phi + V and log Psi + V monotone [" + V.description + "]",
      measured, 0.0, 1e-8);
  out.metadata["pairs_per_tail"] = pairs;
  return out;
}

LinearizationPoint linearization_point(const Potential& V,
                                       const Perturbation& q, double eps,
                                       GridSpec spec) {
  if (std::fabs(V.lambda_lo - 1.0) > 1e-12 ||
      std::fabs(V.lambda_hi - 1.0) > 1e-12 ||
      std::fabs(V.eval(V.argmin + 1.0) - V.eval(V.argmin) - 0.5) > 1e-9)
    throw PreconditionViolated(
        "linearization requires the standard Gaussian potential");
  if (!(eps > 0.0)) throw PreconditionViolated("eps must be positive");

  WeightedMeasure1D source(V);
  WeightedMeasure1D target(V, q.scaled(eps));
  if (!std::isfinite(target.normalization()))
    throw NonFiniteDensity("perturbed density failed to normalize");
  const TransportMap1D map = build_transport(source, target, spec);

  LinearizationPoint pt;
  pt.eps = eps;
  // c_eps = log integral exp(-V - eps q) relative to the base measure.
  pt.c_eps_over_eps = (source.normalization() - target.normalization()) / eps;
  pt.iota_q = -measure_integral(source, q.eval);

  const auto& x = map.grid();
  const auto& y = map.values();
  const auto& ld = map.log_deriv();
  const std::size_t n = x.size();
  const std::size_t skip = n / 20;  // central 90%
  double sup = 0.0;
  for (std::size_t i = skip; i + skip < n; ++i) {
    const double psi_p = (y[i] - x[i]) / eps;
    const double psi_pp = (std::exp(ld[i]) - 1.0) / eps;
    const double resid = psi_pp - x[i] * psi_p - 0.5 * eps * psi_p * psi_p -
                         q.eval(y[i]) - pt.c_eps_over_eps;
    sup = std::fmax(sup, std::fabs(resid));
  }
  pt.residual = sup;
  pt.ratio = sup / eps;
  return pt;
}

double linearization_residual(const Potential& V, const Perturbation& q,
                              double eps, GridSpec spec) {
  return linearization_point(V, q, eps, spec).residual;
}

VerificationOutcome check_linearization(const Potential& V,
                                        const Perturbation& q,
                                        const std::vector<double>& eps_list,
                                        GridSpec spec) {
  const double s = sup_norm_sum(q);
  double max_ratio = 0.0;
  VerificationOutcome out;
  for (double eps : eps_list) {
    const LinearizationPoint pt = linearization_point(V, q, eps, spec);
    max_ratio = std::fmax(max_ratio, pt.ratio);
    out.metadata["ratio_eps_" + std::to_string(eps)] = pt.ratio;
  }
  auto base = make_outcome(
      "linearization: residual(eps)/eps bounded by 2 s^2 [" + q.description +
          "]",
      max_ratio, 2.0 * s * s, 1e-10);
  base.metadata = out.metadata;
  return base;
}

VerificationOutcome check_remark_5_2(const Potential& V, const Perturbation& q,
                                     GridSpec spec) {
  if (sup_norm(q) > 1.0)
    throw PreconditionViolated("remark 5.2 requires sup |q| <= 1");
  WeightedMeasure1D source(V);
  WeightedMeasure1D target(V, q);
  const TransportMap1D map = build_transport(source, target, spec);

  const auto& x = map.grid();
  std::vector<double> dev(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    dev[i] = std::fabs(std::exp(map.log_deriv()[i]) - 1.0);
  const double measured = refine_max(x, dev, [&](double t) {
    return std::fabs(std::exp(map.log_derivative(t)) - 1.0);
  });
  const double e_minus_one = std::exp(1.0) - 1.0;
  auto out = make_outcome("remark52: sup |T' - 1| <= (e-1)(sup q+ + sup q-) [" +
                              V.description + ", " + q.description + "]",
                          measured, e_minus_one * sup_norm_sum(q), 1e-8);
  return out;
}

Suite parse_suite(const std::string& name) {
  if (name == "thm12") return Suite::thm12;
  if (name == "thm13") return Suite::thm13;
  if (name == "lemma51") return Suite::lemma51;
  if (name == "pogorelov") return Suite::pogorelov;
  if (name == "linearization") return Suite::linearization;
  if (name == "all") return Suite::all;
  throw ConfigError("unknown suite '" + name + "'");
}

namespace {

void run_thm12(const SuiteInstance* inst, std::vector<VerificationOutcome>& out) {
  struct Pair {
    const char* v;
    const char* q;
  };
  static const Pair defaults[] = {
      {"gaussian(1)", "none"},
      {"gaussian(1)", "cosine-bump(0.2,1)"},
      {"gaussian(1)", "bump(-0.25,1,2)"},
      {"gaussian(1)", "odd-bump(0.15,1)"},
      {"quartic-regularized(1,0.2)", "cosine-bump(0.3,1)"},
      {"quartic-regularized(1,0.2)", "odd-bump(0.4,1)"},
  };
  std::vector<std::pair<std::string, std::string>> pairs;
  if (inst)
    pairs.emplace_back(inst->potential, inst->perturbation);
  else
    for (const Pair& p : defaults) pairs.emplace_back(p.v, p.q);

  const GridSpec spec = inst ? inst->spec : GridSpec{};
  for (const auto& [vs, qs] : pairs) {
    const Potential V = make_potential(vs);
    auto q = make_perturbation(qs);
    if (!q) q = Perturbation{[](double) { return 0.0; }, kInfinity, 0, 0, 0,
                             "none"};
    out.push_back(check_theorem_1_2(V, *q, spec));
    if (sup_norm(*q) <= 1.0) out.push_back(check_remark_5_2(V, *q, spec));
  }
}

void run_thm13(const SuiteInstance* inst, std::vector<VerificationOutcome>& out) {
  const std::string vs = inst ? inst->potential : "gaussian(1)";
  const std::string qs =
      inst && inst->perturbation != "none" ? inst->perturbation
                                           : "cosine-bump(0.2,1.5)";
  const Potential V = make_potential(vs);
  const auto q = make_perturbation(qs);
  const GridSpec spec = inst ? inst->spec : GridSpec{};
  for (int n : {1, 2, 3, 5, 10, 50})
    out.push_back(check_theorem_1_3(V, *q, n, spec));
}

void run_lemma51(const SuiteInstance* inst,
                 std::vector<VerificationOutcome>& out) {
  if (inst) {
    out.push_back(check_lemma_5_1(make_potential(inst->potential)));
    return;
  }
  out.push_back(check_lemma_5_1(make_potential("gaussian(1)")));
  out.push_back(check_lemma_5_1(make_potential("smooth-abs(0.5)")));
}

void run_pogorelov(const SuiteInstance* inst,
                   std::vector<VerificationOutcome>& out) {
  if (inst && inst->perturbation != "none") {
    out.push_back(check_pogorelov(make_potential(inst->potential),
                                  *make_perturbation(inst->perturbation),
                                  inst->spec));
    return;
  }
  const Potential V = make_potential("gaussian(1)");
  out.push_back(check_pogorelov(V, *make_perturbation("cosine-bump(0.1,1)")));
  out.push_back(check_pogorelov(V, *make_perturbation("cosine-bump(0.3,1)")));
}

void run_linearization(const SuiteInstance* inst,
                       std::vector<VerificationOutcome>& out) {
  // The linearization analysis is specific to the Gaussian base; only the
  // perturbation is configurable.
  const Potential V = make_potential("gaussian(1)");
  const std::string qs = inst && inst->perturbation != "none"
                             ? inst->perturbation
                             : "cosine-bump(1,1)";
  const auto q = make_perturbation(qs);
  const std::vector<double> eps_list{1e-1, 1e-2, 1e-3};
  const GridSpec spec = inst ? inst->spec : GridSpec{};
  out.push_back(check_linearization(V, *q, eps_list, spec));
  const double qn = sup_norm(*q);
  for (double eps : eps_list) {
    const LinearizationPoint pt = linearization_point(V, *q, eps, spec);
    auto o = make_outcome(
        "linearization: |c_eps/eps - iota_q| <= 5 eps |q|^2, eps = " +
            std::to_string(eps),
        std::fabs(pt.c_eps_over_eps - pt.iota_q), 5.0 * eps * qn * qn, 1e-12);
    o.metadata["iota_q"] = pt.iota_q;
    o.metadata["c_eps_over_eps"] = pt.c_eps_over_eps;
    out.push_back(o);
  }
}

}  // namespace

std::vector<VerificationOutcome> run_suite(Suite suite,
                                           const SuiteInstance* instance) {
  std::vector<VerificationOutcome> out;
  switch (suite) {
    case Suite::thm12:
      run_thm12(instance, out);
      break;
    case Suite::thm13:
      run_thm13(instance, out);
      break;
    case Suite::lemma51:
      run_lemma51(instance, out);
      break;
    case Suite::pogorelov:
      run_pogorelov(instance, out);
      break;
    case Suite::linearization:
      run_linearization(instance, out);
      break;
    case Suite::all:
      run_thm12(instance, out);
      run_thm13(instance, out);
      run_lemma51(instance, out);
      run_pogorelov(instance, out);
      run_linearization(instance, out);
      break;
  }
  return out;
}

}  // namespace otmap
