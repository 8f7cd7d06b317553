#include "otmap/bounds.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "otmap/errors.hpp"

namespace otmap {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kLogMax = std::log(std::numeric_limits<double>::max());

double log_add_exp(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double m = std::fmax(a, b);
  return m + std::log1p(std::exp(-std::fabs(a - b)));
}

std::string fmt(double v) {
  std::ostringstream oss;
  oss.precision(17);
  oss << v;
  return oss.str();
}

}  // namespace

void PogorelovParams::validate() const {
  if (!(R > 0.0)) throw PreconditionViolated("R must be positive");
  if (!(lambda > 0.0) || !(Lambda >= lambda) || !std::isfinite(Lambda))
    throw PreconditionViolated("need 0 < lambda <= Lambda < infinity");
  if (!(lambda_q >= 0.0))
    throw PreconditionViolated("lambda_q must be nonnegative");
}

PsiBar PsiBar::build(const PogorelovParams& params) {
  params.validate();
  PsiBar out;
  out.lambda_q_used_ = params.lambda_q;
  if (params.lambda_q == 0.0) {
    out.zero_ = true;
    out.P_ = 1.0 + params.R;
    out.Q_ = kInf;
    return out;
  }

  const double lambda = params.lambda;
  const double R = params.R;
  double lambda_q = params.lambda_q;
  // P > Q iff 4 lambda_q^2 (1 + 2R) > lambda^2.
  if (4.0 * lambda_q * lambda_q * (1.0 + 2.0 * R) <= lambda * lambda) {
    lambda_q = lambda / (2.0 * std::sqrt(1.0 + 2.0 * R)) * (1.0 + 1e-9);
    out.remedied_ = true;
    out.lambda_q_used_ = lambda_q;
  }
  out.zero_ = false;

  const double P = (2.0 * lambda_q + 4.0 * lambda_q * R) / lambda + 1.0 + R;
  const double Q = lambda / (2.0 * lambda_q) + 1.0 + R;
  out.P_ = P;
  out.Q_ = Q;

  // theta on the four pieces: value at the left knot and slope.  The third
  // slope lambda_q lambda^2 / (4 lambda_q^2 (1+2R) - lambda^2) is written in
  // endpoint form lambda / (2 (P - Q)) so that theta(P) = 0 exactly even
  // when the denominator nearly cancels.
  struct Knot {
    double t, th, slope;
  };
  const Knot knots[4] = {
      {0.0, lambda_q, 0.0},
      {R, lambda_q, -lambda_q},
      {Q, -0.5 * lambda, 0.5 * lambda / (P - Q)},
      {P, 0.0, 0.0}};

  double d = 0.0, v = 0.0;
  for (const Knot& k : knots) {
    out.pieces_.push_back({k.t, k.th, k.slope, d, v});
    const std::size_t i = out.pieces_.size() - 1;
    const double t_next = (i + 1 < 4) ? knots[i + 1].t : P;
    const double h = t_next - k.t;
    v += d * h + 0.5 * k.th * h * h + k.slope * h * h * h / 6.0;
    d += k.th * h + 0.5 * k.slope * h * h;
  }
  // d now carries the integral of theta over [0, P], which vanishes
  // algebraically; pin psi'(t >= P) to exactly zero.
  out.psi_end_ = v;
  out.sup_psi_ = v;
  out.sup_psi_prime_ = lambda_q * (R + 0.5);  // psi'(1 + R), theta's zero
  out.pieces_.back().d0 = 0.0;
  out.pieces_.back().v0 = v;
  return out;
}

std::size_t PsiBar::piece_index(double t) const {
  std::size_t i = pieces_.size();
  while (i > 0 && pieces_[i - 1].t0 > t) --i;
  return i == 0 ? 0 : i - 1;
}

double PsiBar::theta(double t) const {
  if (zero_) return 0.0;
  t = std::fmax(t, 0.0);
  if (t >= P_) return 0.0;
  const Piece& p = pieces_[piece_index(t)];
  return p.th0 + p.slope * (t - p.t0);
}

double PsiBar::psi_prime(double t) const {
  if (zero_) return 0.0;
  t = std::fmax(t, 0.0);
  if (t >= P_) return 0.0;
  const Piece& p = pieces_[piece_index(t)];
  const double h = t - p.t0;
  return p.d0 + p.th0 * h + 0.5 * p.slope * h * h;
}

double PsiBar::psi(double t) const {
  if (zero_) return 0.0;
  t = std::fmax(t, 0.0);
  if (t >= P_) return psi_end_;
  const Piece& p = pieces_[piece_index(t)];
  const double h = t - p.t0;
  return p.v0 + p.d0 * h + 0.5 * p.th0 * h * h + p.slope * h * h * h / 6.0;
}

double caffarelli_bound(double Lambda_V, double lambda_W) {
  if (!(Lambda_V > 0.0) || !(lambda_W > 0.0))
    throw PreconditionViolated("curvature constants must be positive");
  return std::sqrt(Lambda_V / lambda_W);
}

std::vector<double> bootstrap_refine(double C, double a0) {
  if (!(C > 0.0)) throw PreconditionViolated("C must be positive");
  if (!(a0 >= C)) throw PreconditionViolated("bootstrap requires a0 >= C");
  std::vector<double> seq{a0};
  double a = a0;
  for (int k = 0; k < 200 && std::fabs(a - C) >= 1e-12; ++k) {
    const double next = (2.0 * C * a - C * C) / a;
    if (a0 > C && !(next < a))
      throw DivergentIteration("bootstrap iterate failed to decrease");
    if (next < C - 1e-12)
      throw DivergentIteration("bootstrap iterate undershot its fixed point");
    seq.push_back(next);
    a = next;
  }
  return seq;
}

PsiBar build_psi_bar(const PogorelovParams& params) {
  return PsiBar::build(params);
}

double perturbation_sup_bound(double lambda_p, double P) {
  return 4.0 * lambda_p * P * P;
}

std::pair<double, double> outreach_radius(double P, double lambda,
                                          double Lambda, double p_sup) {
  if (!(P > 0.0) || !(lambda > 0.0) || !(Lambda > 0.0) || !(p_sup >= 0.0))
    throw PreconditionViolated("outreach_radius arguments out of range");
  const double log_base = std::log(3.0 * std::sqrt(2.0));
  double log_c;
  if (p_sup == 0.0) {
    log_c = log_base;
  } else {
    const double log_second = std::log(4.5 / P) + 9.0 * Lambda * P * P +
                              0.5 * p_sup +
                              0.5 * (std::log(p_sup) - std::log(lambda));
    log_c = log_add_exp(log_base, log_second);
  }
  const double c_prime = log_c > kLogMax ? kInf : std::exp(log_c);
  const double p_prime = (c_prime + 1.0) * P;
  return {c_prime, p_prime};
}

BoundReport theorem_1_1_constant(const PogorelovParams& params) {
  params.validate();
  BoundReport rep;
  rep.params = params;

  rep.q_sup_bound = perturbation_sup_bound(params.lambda_q, params.R);
  rep.details.push_back("q_sup_bound = 4 lambda_q R^2 = " +
                        fmt(rep.q_sup_bound));

  const PsiBar psi = PsiBar::build(params);
  rep.P = psi.P();
  rep.Q = psi.Q();
  rep.sup_psi = psi.sup_psi();
  rep.sup_psi_prime = psi.sup_psi_prime();
  rep.degenerate_remedy = psi.degenerate_remedy_applied();
  rep.lambda_q_used = psi.lambda_q_used();
  if (rep.degenerate_remedy)
    rep.details.push_back(
        "degenerate construction (P <= Q): lambda_q enlarged to " +
        fmt(rep.lambda_q_used));
  rep.details.push_back("P = " + fmt(rep.P) + ", Q = " + fmt(rep.Q));
  rep.details.push_back("sup psi = " + fmt(rep.sup_psi) +
                        ", sup psi' = " + fmt(rep.sup_psi_prime));

  const double log_base = std::log(3.0 * std::sqrt(2.0));
  if (rep.q_sup_bound == 0.0) {
    rep.log_C_prime = log_base;
  } else {
    rep.log_C_prime = log_add_exp(
        log_base, std::log(4.5 / rep.P) + 9.0 * params.Lambda * rep.P * rep.P +
                      0.5 * rep.q_sup_bound +
                      0.5 * (std::log(rep.q_sup_bound) - std::log(params.lambda)));
  }
  rep.log_P_prime = log_add_exp(rep.log_C_prime, 0.0) + std::log(rep.P);
  rep.log_C_tilde = rep.sup_psi_prime > 0.0
                        ? std::log(params.Lambda) + rep.log_P_prime +
                              std::log(rep.sup_psi_prime)
                        : -kInf;
  const double log_caff_branch = 0.5 * std::log(2.0 * params.Lambda / params.lambda);
  rep.log_phi11_bound = log_add_exp(
      rep.log_C_tilde == -kInf
          ? -kInf
          : std::log(2.0 / params.lambda) + rep.log_C_tilde,
      log_caff_branch);
  rep.log_pogorelov_C = rep.log_phi11_bound + rep.sup_psi;
  const double log_caffarelli = 0.5 * std::log(params.Lambda / params.lambda);
  rep.log_final_C = std::fmax(rep.log_pogorelov_C, log_caffarelli);

  auto lin = [](double lg) { return lg > kLogMax ? kInf : std::exp(lg); };
  rep.C_prime = lin(rep.log_C_prime);
  rep.P_prime = lin(rep.log_P_prime);
  rep.C_tilde = rep.log_C_tilde == -kInf ? 0.0 : lin(rep.log_C_tilde);
  rep.phi11_bound = lin(rep.log_phi11_bound);
  rep.pogorelov_C = lin(rep.log_pogorelov_C);
  rep.caffarelli_C = std::exp(log_caffarelli);
  rep.final_C = lin(rep.log_final_C);
  rep.overflowed = !std::isfinite(rep.final_C);

  rep.details.push_back("C' = " + fmt(rep.C_prime) +
                        ", P' = (C'+1) P = " + fmt(rep.P_prime));
  rep.details.push_back("C~ = Lambda P' sup psi' = " + fmt(rep.C_tilde));
  rep.details.push_back("phi11 bound = 2 C~/lambda + sqrt(2 Lambda/lambda) = " +
                        fmt(rep.phi11_bound));
  rep.details.push_back("pogorelov C = phi11 bound * e^{sup psi} = " +
                        fmt(rep.pogorelov_C));
  rep.details.push_back("caffarelli C = sqrt(Lambda/lambda) = " +
                        fmt(rep.caffarelli_C));
  rep.details.push_back("final C = " + fmt(rep.final_C));
  return rep;
}

nlohmann::ordered_json BoundReport::to_json() const {
  nlohmann::ordered_json j;
  j["R"] = params.R;
  j["lambda"] = params.lambda;
  j["Lambda"] = params.Lambda;
  j["lambda_q"] = params.lambda_q;
  j["q_sup_bound"] = q_sup_bound;
  j["P"] = P;
  j["Q"] = Q;
  j["sup_psi"] = sup_psi;
  j["sup_psi_prime"] = sup_psi_prime;
  auto put = [&j](const char* key, double v) {
    if (std::isfinite(v))
      j[key] = v;
    else
      j[key] = "inf";
  };
  put("C_prime", C_prime);
  put("P_prime", P_prime);
  put("C_tilde", C_tilde);
  put("phi11_bound", phi11_bound);
  put("pogorelov_C", pogorelov_C);
  j["caffarelli_C"] = caffarelli_C;
  put("final_C", final_C);
  j["log_C_prime"] = log_C_prime;
  j["log_P_prime"] = log_P_prime;
  j["log_final_C"] = log_final_C;
  j["overflowed"] = overflowed;
  j["degenerate_remedy"] = degenerate_remedy;
  j["lambda_q_used"] = lambda_q_used;
  j["details"] = details;
  return j;
}

double talagrand_bound(double lambda_V, double entropy) {
  if (!(lambda_V > 0.0)) throw PreconditionViolated("lambda_V must be positive");
  if (!(entropy >= 0.0)) throw PreconditionViolated("entropy must be >= 0");
  return 2.0 * entropy / lambda_V;
}

double cost_upper_bound(double lambda, double p_sup, double c_pj, double c_p,
                        double mass_BP) {
  if (!(lambda > 0.0)) throw PreconditionViolated("lambda must be positive");
  if (!(mass_BP >= 0.0) || !(mass_BP <= 1.0))
    throw PreconditionViolated("mass_BP must lie in [0, 1]");
  return 6.0 / lambda * p_sup * std::exp(c_pj + c_p + p_sup) * mass_BP;
}

double log_sobolev_transfer(double grad_T_sup, double base_constant) {
  if (!(grad_T_sup > 0.0) || !(base_constant > 0.0))
    throw PreconditionViolated("log-Sobolev transfer needs positive inputs");
  return base_constant * grad_T_sup * grad_T_sup;
}

}  // namespace otmap
