#include "otmap/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "otmap/catalog.hpp"
#include "otmap/errors.hpp"

namespace otmap {
namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_number(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0')
    throw ConfigError("key '" + key + "': bad number '" + value + "'");
  return v;
}

int parse_int(const std::string& key, const std::string& value) {
  const double v = parse_number(key, value);
  if (v != std::floor(v)) throw ConfigError("key '" + key + "' must be an integer");
  return static_cast<int>(v);
}

}  // namespace

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse(in);
}

ExperimentConfig ExperimentConfig::parse(std::istream& in) {
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "potential")
      cfg.potential = value;
    else if (key == "perturbation")
      cfg.perturbation = value;
    else if (key == "lambda")
      cfg.lambda = parse_number(key, value);
    else if (key == "Lambda")
      cfg.Lambda = parse_number(key, value);
    else if (key == "R")
      cfg.R = parse_number(key, value);
    else if (key == "lambda_q")
      cfg.lambda_q = parse_number(key, value);
    else if (key == "n")
      cfg.n = parse_int(key, value);
    else if (key == "grid_size")
      cfg.grid_size = parse_int(key, value);
    else if (key == "span")
      cfg.span = parse_number(key, value);
    else if (key == "tolerance")
      cfg.tolerance = parse_number(key, value);
    else if (key == "output")
      cfg.output = value;
    else
      throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" +
                        key + "'");
  }
  if (cfg.n < 1) throw ConfigError("n must be >= 1");
  if (cfg.grid_size < 9) throw ConfigError("grid_size must be >= 9");
  if (!std::isnan(cfg.tolerance) &&
      !(cfg.tolerance > 0.0 && cfg.tolerance < 1.0))
    throw ConfigError("tolerance must lie in (0, 1)");
  // Validate catalog references eagerly so errors surface as config errors.
  make_potential(cfg.potential);
  make_perturbation(cfg.perturbation);
  return cfg;
}

MeasureOptions ExperimentConfig::measure_options() const {
  MeasureOptions opt = MeasureOptions::defaults();
  if (!std::isnan(tolerance)) opt.quad.rel_tol = tolerance;
  return opt;
}

PogorelovParams ExperimentConfig::bound_params() const {
  const Potential V = make_potential(potential);
  const auto q = make_perturbation(perturbation);
  PogorelovParams p;
  p.lambda = std::isnan(lambda) ? V.lambda_lo : lambda;
  p.Lambda = std::isnan(Lambda) ? V.lambda_hi : Lambda;
  p.R = !std::isnan(R) ? R
                       : (q && std::isfinite(q->support_radius)
                              ? q->support_radius
                              : 1.0);
  p.lambda_q = std::isnan(lambda_q) ? (q ? q->semiconvexity : 0.0) : lambda_q;
  return p;
}

}  // namespace otmap
