#pragma once

#include <iosfwd>
#include <limits>
#include <string>

#include "otmap/bounds.hpp"
#include "otmap/measure.hpp"
#include "otmap/transport.hpp"

namespace otmap {

/// Flat key-value experiment configuration ("key = value", '#' comments).
/// Keys: potential, perturbation, lambda, Lambda, R, lambda_q, n, grid_size,
/// span, tolerance, output.  Unknown keys are rejected.
struct ExperimentConfig {
  std::string potential = "gaussian(1)";
  std::string perturbation = "none";
  double lambda = kNaN;    // optional overrides for bound parameters
  double Lambda = kNaN;
  double R = kNaN;
  double lambda_q = kNaN;
  int n = 3;
  int grid_size = 4097;
  double span = 0.0;  // 0 = full effective window
  double tolerance = kNaN;
  std::string output;

  static constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

  static ExperimentConfig load(const std::string& path);
  static ExperimentConfig parse(std::istream& in);

  GridSpec grid_spec() const { return GridSpec{grid_size, span}; }
  MeasureOptions measure_options() const;

  /// Bound parameters: explicit keys win, otherwise taken from the declared
  /// potential/perturbation constants.
  PogorelovParams bound_params() const;
};

}  // namespace otmap
