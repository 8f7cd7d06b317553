// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails.  Expected values come from closed forms or from the
// independent oracles in test_support.hpp, never from the library itself.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "otmap/catalog.hpp"
#include "otmap/cli.hpp"
#include "otmap/errors.hpp"
#include "otmap/verify.hpp"
#include "test_support.hpp"

using namespace otmap;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Harness {
  int failures = 0;

  void report(int k, const std::string& name, bool ok,
              const std::string& detail) {
    std::printf("%s  criterion %2d: %s (%s)\n", ok ? "PASS" : "FAIL", k,
                name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }

  void run(int k, const std::string& name,
           const std::function<std::pair<bool, std::string>()>& body) {
    try {
      const auto [ok, detail] = body();
      report(k, name, ok, detail);
    } catch (const std::exception& e) {
      report(k, name, false, std::string("exception: ") + e.what());
    }
  }
};

struct Instance {
  std::string v, q;
};

// The acceptance catalog: both potentials crossed with symmetric, one-signed
// and antisymmetric bumps, heights 0.05 through 1.0.
const std::vector<Instance> kCatalog = {
    {"gaussian(1)", "cosine-bump(0.05,1)"},
    {"gaussian(1)", "cosine-bump(0.3,1)"},
    {"gaussian(1)", "cosine-bump(1.0,1)"},
    {"gaussian(1)", "bump(-0.2,1,2)"},
    {"gaussian(1)", "bump(0.75,1,3)"},
    {"gaussian(1)", "odd-bump(0.5,1)"},
    {"quartic-regularized(1,0.2)", "cosine-bump(0.05,1)"},
    {"quartic-regularized(1,0.2)", "cosine-bump(0.3,1)"},
    {"quartic-regularized(1,0.2)", "cosine-bump(1.0,1)"},
    {"quartic-regularized(1,0.2)", "bump(-0.2,1,2)"},
    {"quartic-regularized(1,0.2)", "bump(0.75,1,3)"},
    {"quartic-regularized(1,0.2)", "odd-bump(0.5,1)"},
};

struct BuiltMap {
  std::string name;
  WeightedMeasure1D source, target;
  TransportMap1D map;
};

std::vector<BuiltMap> g_maps;  // registry for criterion 4

std::string fmt(double v) {
  std::ostringstream oss;
  oss.precision(6);
  oss << v;
  return oss.str();
}

std::pair<bool, std::string> criterion_1() {
  bool ok = true;
  double worst_margin = kInfinity, slowest = 0.0;
  for (const auto& inst : kCatalog) {
    const Potential V = make_potential(inst.v);
    const Perturbation q = *make_perturbation(inst.q);
    const auto t0 = Clock::now();
    WeightedMeasure1D source(V);
    WeightedMeasure1D target(V, q);
    TransportMap1D map = build_transport(source, target, GridSpec{4097, 0.0});
    double sup = 0.0;
    for (double ld : map.log_deriv()) sup = std::fmax(sup, std::fabs(ld));
    const double elapsed = seconds_since(t0);
    const double bound = q.sup_pos + q.sup_neg;
    ok = ok && sup <= bound + 1e-8 && elapsed < 1.0;
    worst_margin = std::fmin(worst_margin, bound - sup);
    slowest = std::fmax(slowest, elapsed);
    g_maps.push_back(
        {inst.v + " -> " + inst.q, source, target, std::move(map)});
  }
  return {ok, "12 instances at 4097 nodes, min margin " + fmt(worst_margin) +
                  ", slowest " + fmt(slowest) + " s"};
}

std::pair<bool, std::string> criterion_2() {
  bool ok = true;
  double worst = 0.0;
  const WeightedMeasure1D src(gaussian_potential(1.0));
  for (double sigma : {0.5, 2.0, 4.0}) {
    const Potential W = gaussian_potential(sigma);
    WeightedMeasure1D tgt(W);
    TransportMap1D map = build_transport(src, tgt, GridSpec{4097, 0.0});
    const double measured = lipschitz_estimate(map);
    const double bound = caffarelli_bound(1.0, W.lambda_lo);
    worst = std::fmax(worst, std::fabs(measured - sigma));
    ok = ok && std::fabs(measured - sigma) <= 1e-8 &&
         std::fabs(bound - sigma) <= 1e-12;
    g_maps.push_back({"gaussian(1) -> gaussian(" + fmt(sigma) + ")", src, tgt,
                      std::move(map)});
  }
  return {ok, "sigma in {0.5, 2, 4}, max |measured - sigma| = " + fmt(worst)};
}

std::pair<bool, std::string> criterion_3() {
  const Potential V = gaussian_potential(1.0);
  const Perturbation q = *make_perturbation("cosine-bump(0.2,1.5)");
  const double s = q.sup_pos + q.sup_neg;
  bool ok = true;
  double t_min = kInfinity, t_max = 0.0, worst = 0.0;
  for (int n : {1, 2, 3, 5, 10, 50}) {
    const auto t0 = Clock::now();
    const RadialTransport rt(V, q, n, GridSpec{4097, 0.0});
    const double r_max = rt.profile().grid().back();
    double measured = 0.0;
    for (int k = 1; k <= 1000; ++k) {
      const auto [radial, tangential] =
          rt.gradient_eigenvalues(r_max * k / 1000.0);
      measured = std::fmax(measured, std::fabs(std::log(radial)));
      measured = std::fmax(measured, std::fabs(std::log(tangential)));
    }
    const double elapsed = seconds_since(t0);
    t_min = std::fmin(t_min, elapsed);
    t_max = std::fmax(t_max, elapsed);
    worst = std::fmax(worst, measured);
    ok = ok && measured <= s + 1e-8;
    auto pair = reduce_to_1d(V, q, n);
    g_maps.push_back({"radial n=" + std::to_string(n), pair.first, pair.second,
                      build_transport(pair.first, pair.second,
                                      GridSpec{4097, 0.0})});
  }
  // Small floor guards the ratio against sub-millisecond jitter.
  const double ratio = (t_max + 0.01) / (t_min + 0.01);
  const bool time_ok = ratio <= 2.0;
  return {ok && time_ok, "n in {1,2,3,5,10,50}, max |log eig| = " + fmt(worst) +
                             " <= " + fmt(s) + ", runtime ratio " + fmt(ratio)};
}

std::pair<bool, std::string> criterion_4() {
  const std::function<double(double)> phis[] = {
      [](double) { return 1.0; },
      [](double t) { return t; },
      [](double t) { return t * t; },
      [](double t) { return std::sin(t); },
      [](double t) { return 0.5 * (1.0 + std::tanh(2.0 * (t - 0.5))); },
  };
  bool ok = true;
  double worst_push = 0.0, worst_inv = 0.0;
  for (const auto& built : g_maps) {
    for (const auto& phi : phis) {
      const double err = std::fabs(push_forward_integral(built.map, phi) -
                                   measure_integral(built.target, phi));
      worst_push = std::fmax(worst_push, err);
      ok = ok && err <= 1e-6;
    }
    const TransportMap1D reverse =
        build_transport(built.target, built.source, GridSpec{4097, 0.0});
    const auto& x = built.map.grid();
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double u = built.source.cdf(x[i], Tail::lower);
      if (u < 0.05 || u > 0.95) continue;  // central 90%
      const double err = std::fabs(reverse(built.map(x[i])) - x[i]);
      worst_inv = std::fmax(worst_inv, err);
      ok = ok && err <= 1e-8;
    }
  }
  return {ok, fmt(g_maps.size()) + " maps, max push-forward err " +
                  fmt(worst_push) + ", max inverse-composition err " +
                  fmt(worst_inv)};
}

std::pair<bool, std::string> criterion_5() {
  const PogorelovParams grid[] = {
      {1.0, 1.0, 1.0, 1.0},  {1.0, 1.0, 2.0, 0.5}, {0.5, 2.0, 2.5, 1.0},
      {2.0, 0.5, 1.0, 0.25}, {1.0, 1.0, 1.0, 0.05},
  };
  bool ok = true;
  bool saw_remedy = false;
  double worst_quad = 0.0;
  for (const auto& params : grid) {
    const PsiBar psi = build_psi_bar(params);
    saw_remedy = saw_remedy || psi.degenerate_remedy_applied();
    ok = ok && std::fabs(psi.theta(psi.Q()) + 0.5 * params.lambda) <= 1e-12;
    // Integral of theta over [0, P] via its exact trapezoid on the knots.
    const double knots[] = {0.0, params.R, psi.Q(), psi.P()};
    double acc = 0.0;
    for (int k = 0; k + 1 < 4; ++k)
      acc += 0.5 * (psi.theta(knots[k]) +
                    psi.theta(knots[k + 1] - 1e-13 * psi.P())) *
             (knots[k + 1] - knots[k]);
    ok = ok && std::fabs(acc) <= 1e-12;
    ok = ok && psi.psi_prime(psi.P()) == 0.0 &&
         psi.psi_prime(2.0 * psi.P()) == 0.0;
    for (int i = 0; i <= 1000; ++i) {
      const double t = 1.05 * psi.P() * i / 1000.0;
      ok = ok && psi.psi_prime(t) >= -1e-12;
      ok = ok && psi.theta(t) >= -0.5 * params.lambda - 1e-12;
    }
    // Closed form vs double quadrature: theta is piecewise linear, so
    // knot-aligned trapezoid + Simpson integrate it exactly.
    const auto pp = [&](double s2) {
      double a = 0.0;
      std::vector<double> pts{0.0};
      for (double kk : {params.R, psi.Q(), psi.P()})
        if (kk < s2) pts.push_back(kk);
      pts.push_back(s2);
      for (std::size_t i2 = 0; i2 + 1 < pts.size(); ++i2)
        a += 0.5 * (psi.theta(pts[i2]) + psi.theta(pts[i2 + 1])) *
             (pts[i2 + 1] - pts[i2]);
      return a;
    };
    for (int i = 1; i <= 100; ++i) {
      const double t = psi.P() * i / 100.0;
      std::vector<double> pts{0.0};
      for (double kk : {params.R, psi.Q(), psi.P()})
        if (kk < t) pts.push_back(kk);
      pts.push_back(t);
      double val = 0.0;
      for (std::size_t i2 = 0; i2 + 1 < pts.size(); ++i2) {
        const double a = pts[i2], b = pts[i2 + 1];
        val += (b - a) / 6.0 *
               (pp(a) + 4.0 * pp(0.5 * (a + b)) + pp(b));
      }
      worst_quad = std::fmax(worst_quad, std::fabs(val - psi.psi(t)));
    }
    ok = ok && worst_quad <= 1e-10;
  }
  ok = ok && saw_remedy;
  return {ok, "5 parameter points incl. degenerate remedy, max closed-form vs "
              "quadrature err " +
                  fmt(worst_quad)};
}

std::pair<bool, std::string> criterion_6() {
  const BoundReport rep = theorem_1_1_constant({1.0, 1.0, 1.0, 1.0});
  bool ok = rep.P == 8.0 && rep.Q == 2.5;

  std::ifstream golden_file(std::string(OTMAP_GOLDEN_DIR) +
                            "/bound_report_1111.json");
  if (!golden_file) return {false, "golden file missing"};
  const auto golden = nlohmann::ordered_json::parse(golden_file);
  const auto current = rep.to_json();
  ok = ok && golden == current;

  // Measured Lipschitz constants never exceed the theorem constant.
  double min_log_margin = kInfinity;
  for (const auto& inst : kCatalog) {
    const Potential V = make_potential(inst.v);
    const Perturbation q = *make_perturbation(inst.q);
    const PogorelovParams params{q.support_radius, V.lambda_lo, V.lambda_hi,
                                 q.semiconvexity};
    const BoundReport r = theorem_1_1_constant(params);
    // Reuse the map built for criterion 1.
    double sup_ld = 0.0;
    for (const auto& built : g_maps)
      if (built.name == inst.v + " -> " + inst.q)
        for (double ld : built.map.log_deriv())
          sup_ld = std::fmax(sup_ld, ld);
    ok = ok && sup_ld <= r.log_final_C;
    min_log_margin = std::fmin(min_log_margin, r.log_final_C - sup_ld);
  }
  return {ok, "golden match " + std::string(golden == current ? "yes" : "NO") +
                  ", min log margin over catalog " + fmt(min_log_margin)};
}

std::pair<bool, std::string> criterion_7() {
  // The iterates from a0 = 2C satisfy a_k = C (k+2)/(k+1) exactly: the fixed
  // point of a -> (2Ca - C^2)/a is neutral (derivative 1 at a = C), so the
  // error after k steps is C/(k+1).  Strict decrease holds; convergence to
  // 1e-12 within 60 iterations does not, and cannot, for this iteration.
  bool decreasing_ok = true;
  bool converged_ok = true;
  double worst_err = 0.0;
  for (double C : {0.5, 1.0, 3.0}) {
    const auto seq = bootstrap_refine(C, 2.0 * C);
    for (std::size_t k = 0; k + 1 < seq.size(); ++k)
      decreasing_ok = decreasing_ok && seq[k + 1] < seq[k];
    const std::size_t probe = std::min<std::size_t>(60, seq.size() - 1);
    const double err60 = std::fabs(seq[probe] - C);
    worst_err = std::fmax(worst_err, err60);
    converged_ok = converged_ok && err60 < 1e-12;
  }
  const bool ok = decreasing_ok && converged_ok;
  return {ok, std::string("strictly decreasing ") +
                  (decreasing_ok ? "yes" : "NO") +
                  "; |a_60 - C| = " + fmt(worst_err) +
                  " (iterates follow C(k+2)/(k+1): the error after k steps "
                  "is C/(k+1), so 1e-12 within 60 iterations is not "
                  "attainable for this iteration)"};
}

std::pair<bool, std::string> criterion_8() {
  bool ok = true;
  double min_tala = kInfinity, min_formula = kInfinity;
  for (const auto& inst : kCatalog) {
    const BuiltMap* built = nullptr;
    for (const auto& b : g_maps)
      if (b.name == inst.v + " -> " + inst.q) built = &b;
    if (!built) return {false, "missing map for " + inst.v};
    const Perturbation& q = *built->target.perturbation();
    const double lambda = built->source.potential().lambda_lo;

    const double cost = transport_cost(built->map).value;
    const double ent = relative_entropy(built->target, built->source);
    const double tala = talagrand_bound(lambda, ent);
    ok = ok && cost <= tala + 1e-9;
    min_tala = std::fmin(min_tala, tala - cost);

    const double c_p =
        built->target.normalization() - built->source.normalization();
    const double p_sup = std::fmax(q.sup_pos, q.sup_neg);
    const double formula = cost_upper_bound(
        lambda, p_sup, 0.0, c_p, built->source.ball_mass(q.support_radius));
    ok = ok && cost <= formula + 1e-9;
    min_formula = std::fmin(min_formula, formula - cost);
  }
  return {ok, "12 instances, min talagrand margin " + fmt(min_tala) +
                  ", min cost-formula margin " + fmt(min_formula)};
}

std::pair<bool, std::string> criterion_9() {
  const auto g = check_lemma_5_1(make_potential("gaussian(1)"));
  const auto s = check_lemma_5_1(make_potential("smooth-abs(0.5)"));
  const bool ok = g.passed && s.passed && g.measured <= 1e-8 &&
                  s.measured <= 1e-8;
  return {ok, "500 pairs per tail; worst violations " + fmt(g.measured) +
                  " (gaussian), " + fmt(s.measured) + " (smooth-abs)"};
}

std::pair<bool, std::string> criterion_10() {
  const Potential V = make_potential("gaussian(1)");
  const Perturbation q = *make_perturbation("cosine-bump(1,1)");
  const double s = q.sup_pos + q.sup_neg;
  const double K = 2.0 * s * s;  // single instance constant
  const double qn = std::fmax(q.sup_pos, q.sup_neg);

  // Independent quadrature for iota_q.
  const double iota = -oracle::simpson(
      [&](double t) {
        return q.eval(t) * std::exp(-0.5 * t * t) / std::sqrt(2 * 3.14159265358979323846);
      },
      -1.0, 1.0);

  bool ok = true;
  double max_ratio = 0.0, worst_iota = 0.0;
  for (double eps : {1e-1, 1e-2, 1e-3}) {
    const LinearizationPoint pt = linearization_point(V, q, eps);
    max_ratio = std::fmax(max_ratio, pt.ratio);
    ok = ok && pt.ratio <= K;
    const double err = std::fabs(pt.c_eps_over_eps - iota);
    worst_iota = std::fmax(worst_iota, err / (5.0 * eps * qn * qn));
    ok = ok && err <= 5.0 * eps * qn * qn;
  }
  return {ok, "max residual ratio " + fmt(max_ratio) + " <= K = " + fmt(K) +
                  "; iota_q error / bound <= " + fmt(worst_iota)};
}

std::pair<bool, std::string> criterion_11() {
  const char* out1 = "/tmp/otmap_acceptance_verify1.json";
  const char* out2 = "/tmp/otmap_acceptance_verify2.json";
  const int r1 = cli::run({"verify", "--suite", "all", "--json", "--out", out1});
  const int r2 = cli::run({"verify", "--suite", "all", "--json", "--out", out2});
  const auto slurp = [](const char* p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream oss;
    oss << in.rdbuf();
    return oss.str();
  };
  const std::string a = slurp(out1), b = slurp(out2);
  std::remove(out1);
  std::remove(out2);
  const bool ok = r1 == 0 && r2 == 0 && !a.empty() && a == b;
  return {ok, "verify --suite all run twice: exit codes " + fmt(r1) + "/" +
                  fmt(r2) + ", byte-identical " + (a == b ? "yes" : "NO")};
}

}  // namespace

int main() {
  Harness h;
  h.run(1, "theorem 1.2 sweep over the catalog", criterion_1);
  h.run(2, "contraction bound saturated by gaussian scaling", criterion_2);
  h.run(3, "dimension-free radial eigenvalue bounds", criterion_3);
  h.run(4, "push-forward oracle equivalence and inverse composition",
        criterion_4);
  h.run(5, "auxiliary function construction", criterion_5);
  h.run(6, "theorem 1.1 constant chain golden test", criterion_6);
  h.run(7, "bootstrap refinement", criterion_7);
  h.run(8, "talagrand and cost upper bounds", criterion_8);
  h.run(9, "log-CDF monotonicity", criterion_9);
  h.run(10, "1-D linearization residual", criterion_10);
  h.run(11, "deterministic verification output", criterion_11);
  if (h.failures) std::printf("%d criterion(s) failed\n", h.failures);
  return h.failures == 0 ? 0 : 1;
}
