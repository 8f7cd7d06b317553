#pragma once

#include <optional>
#include <string>

#include "otmap/potential.hpp"

namespace otmap {

/// Built-in potentials addressable by name from CLI configs.
Potential gaussian_potential(double sigma);
Potential quartic_regularized_potential(double a, double b);
Potential smooth_abs_potential(double eps);

/// Built-in perturbations.
Perturbation bump_perturbation(double height, double radius, int smoothness);
Perturbation cosine_bump_perturbation(double height, double radius);
Perturbation odd_bump_perturbation(double height, double radius);

/// Parses a catalog spec of the form "name(arg1,arg2,...)".  Recognized
/// potentials: gaussian(sigma), quartic-regularized(a,b), smooth-abs(eps).
/// Throws ConfigError for unknown names or out-of-range parameters.
Potential make_potential(const std::string& spec);

/// Recognized perturbations: bump(height,radius,smoothness),
/// cosine-bump(height,radius), odd-bump(height,radius).  "none" or an empty
/// spec yields no perturbation.
std::optional<Perturbation> make_perturbation(const std::string& spec);

}  // namespace otmap
