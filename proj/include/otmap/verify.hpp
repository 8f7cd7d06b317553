#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "otmap/bounds.hpp"
#include "otmap/radial.hpp"
#include "otmap/transport.hpp"

namespace otmap {

/// Result of one theorem check: a measured quantity, the bound it must stay
/// under, and the declared tolerance of the comparison.
struct VerificationOutcome {
  std::string claim;
  double measured = 0.0;
  double bound = 0.0;
  double margin = 0.0;  // bound - measured
  double tolerance = 0.0;
  bool passed = false;
  std::map<std::string, double> metadata;

  nlohmann::ordered_json to_json() const;
};

VerificationOutcome make_outcome(std::string claim, double measured,
                                 double bound, double tolerance);

/// Numerical sup of T' over the grid, refined by golden-section search
/// around the arg-max node.
double lipschitz_estimate(const TransportMap1D& map);

/// sup |log T'| <= sup q+ + sup q-  for source exp(-V), target exp(-V-q).
VerificationOutcome check_theorem_1_2(const Potential& V, const Perturbation& q,
                                      GridSpec spec = {});

/// Both gradient eigenvalues of the radial map stay in
/// [e^{-s}, e^{s}], s = sup q+ + sup q-, sampled at 1000 radii.
VerificationOutcome check_theorem_1_3(const Potential& V_radial,
                                      const Perturbation& q_radial, int n,
                                      GridSpec spec = {});

struct HProfile {
  std::vector<double> x;
  std::vector<double> h;   // T'(x) e^{psi(|T(x)|)}
  double max_h = 0.0;
  double log_max_h = 0.0;
};

/// Pogorelov diagnostic h(x) = T'(x) e^{psi(|T(x)|)} along the grid.
HProfile pogorelov_h_profile(const TransportMap1D& map, const PsiBar& psi);

/// h stays below the full theorem constant for instances satisfying its
/// hypotheses (compared in log space; the constant may overflow doubles).
VerificationOutcome check_pogorelov(const Potential& V, const Perturbation& q,
                                    GridSpec spec = {});

/// Monotonicity of log Phi + V and log Psi + V on 500 random ordered
/// pairs per tail.
VerificationOutcome check_lemma_5_1(const Potential& V,
                                    std::uint64_t seed = 0x0717c0ffee5eedULL);

/// Sup over the central 90% of the grid of the 1-D linearization residual
///   psi'' - x psi' - (eps/2) psi'^2 - q(T(x)) - c_eps/eps,
/// with psi' = (T - id)/eps and psi'' = (T' - 1)/eps.
double linearization_residual(const Potential& V, const Perturbation& q,
                              double eps, GridSpec spec = {});

struct LinearizationPoint {
  double eps = 0.0;
  double residual = 0.0;
  double ratio = 0.0;           // residual / eps
  double c_eps_over_eps = 0.0;
  double iota_q = 0.0;          // -integral of q against the base measure
};

LinearizationPoint linearization_point(const Potential& V,
                                       const Perturbation& q, double eps,
                                       GridSpec spec = {});

/// residual(eps)/eps bounded by 2 s^2 over the sweep, s = sup q+ + sup q-.
VerificationOutcome check_linearization(const Potential& V,
                                        const Perturbation& q,
                                        const std::vector<double>& eps_list,
                                        GridSpec spec = {});

/// sup |T' - 1| <= (e - 1)(sup q+ + sup q-) in the linear regime; requires
/// sup |q| <= 1.
VerificationOutcome check_remark_5_2(const Potential& V, const Perturbation& q,
                                     GridSpec spec = {});

enum class Suite { thm12, thm13, lemma51, pogorelov, linearization, all };

Suite parse_suite(const std::string& name);

struct SuiteInstance {
  std::string potential = "gaussian(1)";
  std::string perturbation = "none";
  int dimension = 3;
  GridSpec spec{};
};

/// Runs the selected suite on the built-in catalog instances, or on the
/// given instance when one is supplied.
std::vector<VerificationOutcome> run_suite(Suite suite,
                                           const SuiteInstance* instance);

}  // namespace otmap
