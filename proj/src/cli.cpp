#include "otmap/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "otmap/catalog.hpp"
#include "otmap/config.hpp"
#include "otmap/errors.hpp"
#include "otmap/format.hpp"
#include "otmap/verify.hpp"

namespace otmap::cli {
namespace {

std::ostream& open_output(std::ofstream& file, const std::string& path) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path, std::ios::binary);
  if (!file) throw ConfigError("cannot open output file '" + path + "'");
  return file;
}

ExperimentConfig load_config(const std::string& path) {
  if (path.empty()) return ExperimentConfig{};
  return ExperimentConfig::load(path);
}

int cmd_transport1d(const std::string& config_path, const std::string& out) {
  const ExperimentConfig cfg = load_config(config_path);
  const MeasureOptions mopt = cfg.measure_options();
  const Potential V = make_potential(cfg.potential);
  const auto q = make_perturbation(cfg.perturbation);
  WeightedMeasure1D source(V, std::nullopt, 0, std::nullopt, mopt);
  WeightedMeasure1D target(V, q, 0, std::nullopt, mopt);
  const TransportMap1D map = build_transport(source, target, cfg.grid_spec());

  std::vector<std::vector<double>> rows;
  rows.reserve(map.grid().size());
  for (std::size_t i = 0; i < map.grid().size(); ++i) {
    const double x = map.grid()[i];
    const double t = map.values()[i];
    const double phi_s = source.cdf(x, Tail::lower);
    const double phi_t = target.cdf(t, Tail::lower);
    rows.push_back({x, t, map.log_deriv()[i], phi_s, phi_t,
                    std::fabs(phi_s - phi_t)});
  }
  std::ofstream file;
  write_csv(open_output(file, out.empty() ? cfg.output : out),
            {"x", "T", "logTprime", "phi_source", "phi_target_at_T",
             "residual_mass_balance"},
            rows);
  return 0;
}

int cmd_radial(const std::string& config_path, int n_override,
               const std::string& out) {
  ExperimentConfig cfg = load_config(config_path);
  if (n_override > 0) cfg.n = n_override;
  const Potential V = make_potential(cfg.potential);
  const auto q = make_perturbation(cfg.perturbation);
  const RadialTransport rt(V, q, cfg.n, cfg.grid_spec(),
                           cfg.measure_options());
  const double s = rt.q_sup_pos() + rt.q_sup_neg();
  const double lo_bound = std::exp(-s), hi_bound = std::exp(s);

  std::vector<std::vector<double>> rows;
  const auto& grid = rt.profile().grid();
  rows.reserve(grid.size());
  for (double r : grid) {
    const auto [radial, tangential] = rt.gradient_eigenvalues(r);
    rows.push_back({r, rt.profile_value(r), radial, tangential, lo_bound,
                    hi_bound});
  }
  std::ofstream file;
  write_csv(open_output(file, out.empty() ? cfg.output : out),
            {"r", "Tprofile", "radial_eig", "tangential_eig", "lower_bound",
             "upper_bound"},
            rows);
  return 0;
}

int cmd_bounds(const PogorelovParams& params, bool json,
               const std::string& out) {
  const BoundReport report = theorem_1_1_constant(params);
  std::ofstream file;
  std::ostream& os = open_output(file, out);
  if (json) {
    os << report.to_json().dump(2) << '\n';
  } else {
    for (const std::string& line : report.details) os << line << '\n';
  }
  return 0;
}

int cmd_psi(const PogorelovParams& params, const std::string& out) {
  const PsiBar psi = build_psi_bar(params);
  const double t_max = 1.1 * psi.P();
  const int samples = 512;
  std::vector<std::vector<double>> rows;
  rows.reserve(samples + 1);
  for (int i = 0; i <= samples; ++i) {
    const double t = t_max * i / samples;
    rows.push_back({t, psi.theta(t), psi.psi_prime(t), psi.psi(t)});
  }
  std::ofstream file;
  write_csv(open_output(file, out), {"t", "theta", "psi_prime", "psi"}, rows);
  return 0;
}

int cmd_verify(const std::string& suite_name, const std::string& config_path,
               bool json, const std::string& out) {
  const Suite suite = parse_suite(suite_name);
  std::optional<SuiteInstance> instance;
  if (!config_path.empty()) {
    const ExperimentConfig cfg = ExperimentConfig::load(config_path);
    instance = SuiteInstance{cfg.potential, cfg.perturbation, cfg.n,
                             cfg.grid_spec()};
  }
  const auto outcomes = run_suite(suite, instance ? &*instance : nullptr);

  std::ofstream file;
  std::ostream& os = open_output(file, out);
  bool all_passed = true;
  if (json) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& o : outcomes) {
      arr.push_back(o.to_json());
      all_passed = all_passed && o.passed;
    }
    os << arr.dump(2) << '\n';
  } else {
    for (const auto& o : outcomes) {
      os << (o.passed ? "PASS" : "FAIL") << "  " << o.claim
         << "  measured=" << format_double(o.measured)
         << " bound=" << format_double(o.bound)
         << " margin=" << format_double(o.margin) << '\n';
      all_passed = all_passed && o.passed;
    }
  }
  return all_passed ? 0 : 1;
}

std::vector<double> parse_values(const std::string& csv) {
  std::vector<double> out;
  if (csv.empty()) return out;
  std::istringstream iss(csv);
  std::string tok;
  while (std::getline(iss, tok, ',')) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0')
      throw ConfigError("bad sweep value '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

std::string replace_first_arg(const std::string& spec, double value) {
  const auto open = spec.find('(');
  if (open == std::string::npos)
    throw ConfigError("spec '" + spec + "' has no parameters to sweep");
  const auto close = spec.rfind(')');
  std::string args = spec.substr(open + 1, close - open - 1);
  const auto comma = args.find(',');
  std::ostringstream oss;
  oss << spec.substr(0, open) << '(' << format_double(value);
  if (comma != std::string::npos) oss << args.substr(comma);
  oss << ')';
  return oss.str();
}

// One sweep row: the measured quantity, the theorem bound it is compared
// against, and the margin.  Axis n and height compare sup |log T'| with the
// sup-norm bound; sigma compares the measured Lipschitz constant with the
// contraction bound; lambda_q compares the measured log-Lipschitz constant
// of the configured instance with the log of the full theorem constant.
std::vector<double> sweep_row(const ExperimentConfig& cfg,
                              const std::string& axis, double value) {
  const MeasureOptions mopt = cfg.measure_options();
  if (axis == "n") {
    const Potential V = make_potential(cfg.potential);
    const auto q = make_perturbation(cfg.perturbation);
    if (!q) throw ConfigError("sweep over n needs a perturbation");
    const int n = static_cast<int>(value);
    const RadialTransport rt(V, q, n, cfg.grid_spec(), mopt);
    double measured = 0.0;
    for (double ld : rt.profile().log_deriv())
      measured = std::fmax(measured, std::fabs(ld));
    const double bound = q->sup_pos + q->sup_neg;
    return {value, measured, bound, bound - measured};
  }
  if (axis == "height") {
    const Potential V = make_potential(cfg.potential);
    const auto q = make_perturbation(replace_first_arg(cfg.perturbation, value));
    WeightedMeasure1D source(V, std::nullopt, 0, std::nullopt, mopt);
    WeightedMeasure1D target(V, q, 0, std::nullopt, mopt);
    const TransportMap1D map = build_transport(source, target, cfg.grid_spec());
    double measured = 0.0;
    for (double ld : map.log_deriv()) measured = std::fmax(measured, std::fabs(ld));
    const double bound = q->sup_pos + q->sup_neg;
    return {value, measured, bound, bound - measured};
  }
  if (axis == "sigma") {
    const Potential V = make_potential(cfg.potential);
    const Potential W = gaussian_potential(value);
    WeightedMeasure1D source(V, std::nullopt, 0, std::nullopt, mopt);
    WeightedMeasure1D target(W, std::nullopt, 0, std::nullopt, mopt);
    const TransportMap1D map = build_transport(source, target, cfg.grid_spec());
    const double measured = lipschitz_estimate(map);
    const double bound = caffarelli_bound(V.lambda_hi, W.lambda_lo);
    return {value, measured, bound, bound - measured};
  }
  if (axis == "lambda_q") {
    PogorelovParams params = cfg.bound_params();
    params.lambda_q = value;
    const BoundReport report = theorem_1_1_constant(params);
    const Potential V = make_potential(cfg.potential);
    const auto q = make_perturbation(cfg.perturbation);
    double measured = 0.0;
    if (q) {
      WeightedMeasure1D source(V, std::nullopt, 0, std::nullopt, mopt);
      WeightedMeasure1D target(V, q, 0, std::nullopt, mopt);
      const TransportMap1D map = build_transport(source, target, cfg.grid_spec());
      measured = std::log(lipschitz_estimate(map));
    }
    return {value, measured, report.log_final_C,
            report.log_final_C - measured};
  }
  throw ConfigError("unknown sweep axis '" + axis + "'");
}

int cmd_sweep(const std::string& config_path, const std::string& axis,
              const std::string& values_csv, const std::string& out) {
  const ExperimentConfig cfg = load_config(config_path);
  const std::vector<double> values = parse_values(values_csv);
  std::vector<std::vector<double>> rows;
  rows.reserve(values.size());
  for (double v : values) rows.push_back(sweep_row(cfg, axis, v));
  std::ofstream file;
  write_csv(open_output(file, out.empty() ? cfg.output : out),
            {"value", "measured", "bound", "margin"}, rows);
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Optimal transport maps between perturbed log-concave measures"};
  app.require_subcommand(1);

  std::string config_path, out_path, suite = "all", axis, values;
  int n_override = 0;
  bool json = false;
  PogorelovParams params;

  auto* t1d = app.add_subcommand("transport1d", "quantile-matching 1-D map");
  t1d->add_option("--config", config_path, "config file");
  t1d->add_option("--out", out_path, "output CSV");

  auto* rad = app.add_subcommand("radial", "radial transport profile");
  rad->add_option("--config", config_path, "config file");
  rad->add_option("--n", n_override, "dimension override");
  rad->add_option("--out", out_path, "output CSV");

  auto* bnd = app.add_subcommand("bounds", "theorem constant chain");
  bnd->add_option("--R", params.R, "perturbation support radius")->required();
  bnd->add_option("--lambda", params.lambda, "lower curvature")->required();
  bnd->add_option("--Lambda", params.Lambda, "upper curvature")->required();
  bnd->add_option("--lambda-q", params.lambda_q, "semiconvexity")->required();
  bnd->add_flag("--json", json, "JSON report");
  bnd->add_option("--out", out_path, "output file");

  auto* psi = app.add_subcommand("psi", "auxiliary function samples");
  psi->add_option("--R", params.R, "perturbation support radius")->required();
  psi->add_option("--lambda", params.lambda, "lower curvature")->required();
  psi->add_option("--Lambda", params.Lambda, "upper curvature")->required();
  psi->add_option("--lambda-q", params.lambda_q, "semiconvexity")->required();
  psi->add_option("--out", out_path, "output CSV");

  auto* ver = app.add_subcommand("verify", "theorem checking suites");
  ver->add_option("--suite", suite,
                  "thm12|thm13|lemma51|pogorelov|linearization|all");
  ver->add_option("--config", config_path, "config file");
  ver->add_flag("--json", json, "JSON outcomes");
  ver->add_option("--out", out_path, "output file");

  auto* swp = app.add_subcommand("sweep", "parameter sweeps");
  swp->add_option("--config", config_path, "config file");
  swp->add_option("--axis", axis, "n|height|lambda_q|sigma")->required();
  swp->add_option("--values", values, "comma-separated values")->required();
  swp->add_option("--out", out_path, "output CSV");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      std::cout << app.help();
      return 0;
    }
    std::cerr << e.what() << '\n' << app.help();
    return 2;
  }

  try {
    if (t1d->parsed()) return cmd_transport1d(config_path, out_path);
    if (rad->parsed()) return cmd_radial(config_path, n_override, out_path);
    if (bnd->parsed()) return cmd_bounds(params, json, out_path);
    if (psi->parsed()) return cmd_psi(params, out_path);
    if (ver->parsed()) return cmd_verify(suite, config_path, json, out_path);
    if (swp->parsed()) return cmd_sweep(config_path, axis, values, out_path);
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace otmap::cli
