#pragma once

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace otmap {

struct PogorelovParams {
  double R = 1.0;
  double lambda = 1.0;
  double Lambda = 1.0;
  double lambda_q = 0.0;

  void validate() const;  // 0 < lambda <= Lambda, R > 0, lambda_q >= 0
};

/// The auxiliary function psi-bar with psi-bar'' = theta, where theta is the
/// four-piece profile: constant lambda_q on [0, R], linear down to -lambda/2
/// at Q, linear back to zero at P, and zero beyond.  The two integrals of
/// theta are piecewise polynomials kept in closed form.  When
/// 4 lambda_q^2 (1 + 2R) <= lambda^2 the third piece would be empty; the
/// construction then enlarges lambda_q just enough to restore P > Q (an
/// enlarged semiconvexity constant is always admissible) and records that it
/// did so.
class PsiBar {
public:
  static PsiBar build(const PogorelovParams& params);

  double P() const { return P_; }
  double Q() const { return Q_; }
  double theta(double t) const;
  double psi_prime(double t) const;
  double psi(double t) const;
  double sup_psi() const { return sup_psi_; }
  double sup_psi_prime() const { return sup_psi_prime_; }

  bool zero() const { return zero_; }
  bool degenerate_remedy_applied() const { return remedied_; }
  double lambda_q_used() const { return lambda_q_used_; }

private:
  struct Piece {
    double t0;      // left knot
    double th0;     // theta at t0
    double slope;   // theta slope on the piece
    double d0;      // psi' at t0
    double v0;      // psi at t0
  };

  std::size_t piece_index(double t) const;

  std::vector<Piece> pieces_;
  double P_ = 0.0, Q_ = 0.0;
  double sup_psi_ = 0.0, sup_psi_prime_ = 0.0;
  double psi_end_ = 0.0;
  bool zero_ = true;
  bool remedied_ = false;
  double lambda_q_used_ = 0.0;
};

/// Every constant in the main estimate, chained exactly as the proof does.
/// The log_* companions are always finite; the linear fields overflow to
/// +inf (and set `overflowed`) once the exponentials leave double range.
struct BoundReport {
  PogorelovParams params;
  double q_sup_bound = 0.0;  // 4 lambda_q R^2
  double P = 0.0, Q = 0.0;
  double C_prime = 0.0, P_prime = 0.0;
  double C_tilde = 0.0;
  double phi11_bound = 0.0;
  double pogorelov_C = 0.0;
  double caffarelli_C = 0.0;
  double final_C = 0.0;
  double sup_psi = 0.0, sup_psi_prime = 0.0;
  double log_C_prime = 0.0, log_P_prime = 0.0, log_C_tilde = 0.0;
  double log_phi11_bound = 0.0, log_pogorelov_C = 0.0, log_final_C = 0.0;
  bool overflowed = false;
  bool degenerate_remedy = false;
  double lambda_q_used = 0.0;
  std::vector<std::string> details;

  nlohmann::ordered_json to_json() const;
};

/// Contraction bound sqrt(Lambda_V / lambda_W).
double caffarelli_bound(double Lambda_V, double lambda_W);

/// Iterates a -> (2Ca - C^2)/a from a0 until |a - C| < 1e-12 or 200 steps.
/// Returns the sequence starting at a0; strictly decreasing for a0 > C.
/// Throws DivergentIteration if monotone decrease ever fails.
std::vector<double> bootstrap_refine(double C, double a0);

PsiBar build_psi_bar(const PogorelovParams& params);

/// Sup bound 4 lambda_p P^2 for a semiconvex perturbation supported in a
/// ball of radius P.
double perturbation_sup_bound(double lambda_p, double P);

/// Outreach constants (C', P') with
/// C' = 3 sqrt(2) + (9 e^{9 Lambda P^2 + p_sup/2} / 2P) sqrt(p_sup/lambda)
/// and P' = (C' + 1) P, evaluated in log space against overflow.
std::pair<double, double> outreach_radius(double P, double lambda,
                                          double Lambda, double p_sup);

/// Full constant chain of the main theorem.
BoundReport theorem_1_1_constant(const PogorelovParams& params);

/// Talagrand transport bound (2 / lambda_V) * entropy.
double talagrand_bound(double lambda_V, double entropy);

/// Cost bound (6/lambda) p_sup e^{c_pj + c_p + p_sup} mass_BP.
double cost_upper_bound(double lambda, double p_sup, double c_pj, double c_p,
                        double mass_BP);

/// Log-Sobolev constant transferred through a Lipschitz map.
double log_sobolev_transfer(double grad_T_sup, double base_constant);

}  // namespace otmap
