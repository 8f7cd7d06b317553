#include "otmap/catalog.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "otmap/errors.hpp"

namespace otmap {
namespace {

constexpr double kPi = 3.14159265358979323846;

std::string describe(const std::string& name, const std::vector<double>& a) {
  std::ostringstream oss;
  oss << name << '(';
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) oss << ',';
    oss << a[i];
  }
  oss << ')';
  return oss.str();
}

// Deterministic scan used where a closed-form extremum is not worth spelling
// out; 4097 samples plus the center resolve the catalog shapes to ~1e-7,
// well below the validation tolerance the declarations are checked with.
double grid_min(const std::function<double(double)>& f, double lo, double hi) {
  double best = f(0.5 * (lo + hi));
  const int n = 4096;
  for (int i = 0; i <= n; ++i)
    best = std::fmin(best, f(lo + (hi - lo) * i / n));
  return best;
}

}  // namespace

Potential gaussian_potential(double sigma) {
  if (!(sigma > 0.0)) throw ConfigError("gaussian: sigma must be > 0");
  const double inv = 1.0 / (sigma * sigma);
  Potential p;
  p.eval = [inv](double t) { return 0.5 * inv * t * t; };
  p.deriv = [inv](double t) { return inv * t; };
  p.second_deriv = [inv](double) { return inv; };
  p.lambda_lo = inv;
  p.lambda_hi = inv;
  p.argmin = 0.0;
  p.description = describe("gaussian", {sigma});
  return p;
}

Potential quartic_regularized_potential(double a, double b) {
  if (!(a > 0.0) || !(b >= 0.0))
    throw ConfigError("quartic-regularized: requires a > 0, b >= 0");
  // V = a t^2/2 + b t^4/(1+t^2) = a t^2/2 + b (t^2 - 1 + 1/(1+t^2)),
  // with V'' = a + b (2 + (6t^2-2)/(1+t^2)^3) in [a, a + 2.5 b].
  Potential p;
  p.eval = [a, b](double t) {
    const double u = t * t;
    return 0.5 * a * u + b * (u - 1.0 + 1.0 / (1.0 + u));
  };
  p.deriv = [a, b](double t) {
    const double w = 1.0 + t * t;
    return a * t + b * (2.0 * t - 2.0 * t / (w * w));
  };
  p.second_deriv = [a, b](double t) {
    const double u = t * t;
    const double w = 1.0 + u;
    return a + b * (2.0 + (6.0 * u - 2.0) / (w * w * w));
  };
  p.lambda_lo = a;
  p.lambda_hi = a + 2.5 * b;
  p.argmin = 0.0;
  p.description = describe("quartic-regularized", {a, b});
  return p;
}

Potential smooth_abs_potential(double eps) {
  if (!(eps > 0.0)) throw ConfigError("smooth-abs: eps must be > 0");
  Potential p;
  p.eval = [eps](double t) { return std::sqrt(t * t + eps * eps) - eps; };
  p.deriv = [eps](double t) { return t / std::sqrt(t * t + eps * eps); };
  p.second_deriv = [eps](double t) {
    const double r = std::sqrt(t * t + eps * eps);
    return eps * eps / (r * r * r);
  };
  p.lambda_lo = 0.0;
  p.lambda_hi = 1.0 / eps;
  p.argmin = 0.0;
  p.description = describe("smooth-abs", {eps});
  return p;
}

Perturbation bump_perturbation(double height, double radius, int smoothness) {
  if (!(radius > 0.0)) throw ConfigError("bump: radius must be > 0");
  if (smoothness < 2 || smoothness > 8)
    throw ConfigError("bump: smoothness must be an integer in [2, 8]");
  const double h = height, r = radius;
  const int s = smoothness;
  Perturbation q;
  q.eval = [h, r, s](double t) {
    const double u = t / r;
    const double w = 1.0 - u * u;
    return w > 0.0 ? h * std::pow(w, s) : 0.0;
  };
  q.support_radius = r;
  q.sup_pos = std::fmax(h, 0.0);
  q.sup_neg = std::fmax(-h, 0.0);
  const auto second = [h, r, s](double t) {
    const double u = t / r;
    const double w = 1.0 - u * u;
    if (w <= 0.0) return 0.0;
    // (d/dt)^2 h (1-u^2)^s with u = t/r.
    const double f2 = -2.0 * s * std::pow(w, s - 1) +
                      4.0 * s * (s - 1) * u * u * std::pow(w, s - 2);
    return h * f2 / (r * r);
  };
  q.semiconvexity = std::fmax(0.0, -grid_min(second, -r, r));
  q.description = describe("bump", {height, radius, double(smoothness)});
  return q;
}

Perturbation cosine_bump_perturbation(double height, double radius) {
  if (!(radius > 0.0)) throw ConfigError("cosine-bump: radius must be > 0");
  const double h = height, r = radius;
  Perturbation q;
  q.eval = [h, r](double t) {
    if (std::fabs(t) >= r) return 0.0;
    return 0.5 * h * (1.0 + std::cos(kPi * t / r));
  };
  q.support_radius = r;
  q.sup_pos = std::fmax(h, 0.0);
  q.sup_neg = std::fmax(-h, 0.0);
  q.semiconvexity = std::fabs(h) * kPi * kPi / (2.0 * r * r);
  q.description = describe("cosine-bump", {height, radius});
  return q;
}

Perturbation odd_bump_perturbation(double height, double radius) {
  if (!(radius > 0.0)) throw ConfigError("odd-bump: radius must be > 0");
  // g(theta) = sin(theta)(1+cos(theta))/2, normalized so the amplitude is
  // exactly |height|; odd in t and C^1 at the support boundary.
  const double g_max = 3.0 * std::sqrt(3.0) / 8.0;
  const double h = height, r = radius;
  Perturbation q;
  q.eval = [h, r, g_max](double t) {
    if (std::fabs(t) >= r) return 0.0;
    const double th = kPi * t / r;
    return h * 0.5 * std::sin(th) * (1.0 + std::cos(th)) / g_max;
  };
  q.support_radius = r;
  q.sup_pos = std::fabs(h);
  q.sup_neg = std::fabs(h);
  const auto second = [h, r, g_max](double t) {
    if (std::fabs(t) >= r) return 0.0;
    const double th = kPi * t / r;
    const double g2 = -0.5 * std::sin(th) - std::sin(2.0 * th);
    return h * (kPi / r) * (kPi / r) * g2 / g_max;
  };
  q.semiconvexity = std::fmax(0.0, -grid_min(second, -r, r));
  q.description = describe("odd-bump", {height, radius});
  return q;
}

namespace {

struct ParsedSpec {
  std::string name;
  std::vector<double> args;
};

ParsedSpec parse_spec(const std::string& spec) {
  ParsedSpec out;
  const auto open = spec.find('(');
  if (open == std::string::npos) {
    out.name = spec;
    return out;
  }
  const auto close = spec.rfind(')');
  if (close == std::string::npos || close < open)
    throw ConfigError("malformed catalog spec: " + spec);
  out.name = spec.substr(0, open);
  std::string args = spec.substr(open + 1, close - open - 1);
  std::istringstream iss(args);
  std::string tok;
  while (std::getline(iss, tok, ',')) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    while (end && *end == ' ') ++end;
    if (end == tok.c_str() || (end && *end != '\0'))
      throw ConfigError("bad numeric argument '" + tok + "' in " + spec);
    out.args.push_back(v);
  }
  return out;
}

void expect_args(const ParsedSpec& s, std::size_t n) {
  if (s.args.size() != n) {
    std::ostringstream oss;
    oss << s.name << " expects " << n << " argument(s), got " << s.args.size();
    throw ConfigError(oss.str());
  }
}

}  // namespace

Potential make_potential(const std::string& spec) {
  const ParsedSpec s = parse_spec(spec);
  if (s.name == "gaussian") {
    expect_args(s, 1);
    return gaussian_potential(s.args[0]);
  }
  if (s.name == "quartic-regularized") {
    expect_args(s, 2);
    return quartic_regularized_potential(s.args[0], s.args[1]);
  }
  if (s.name == "smooth-abs") {
    expect_args(s, 1);
    return smooth_abs_potential(s.args[0]);
  }
  throw ConfigError("unknown potential '" + s.name + "'");
}

std::optional<Perturbation> make_perturbation(const std::string& spec) {
  if (spec.empty() || spec == "none") return std::nullopt;
  const ParsedSpec s = parse_spec(spec);
  if (s.name == "bump") {
    expect_args(s, 3);
    const double sm = s.args[2];
    if (sm != std::floor(sm))
      throw ConfigError("bump: smoothness must be an integer");
    return bump_perturbation(s.args[0], s.args[1], static_cast<int>(sm));
  }
  if (s.name == "cosine-bump") {
    expect_args(s, 2);
    return cosine_bump_perturbation(s.args[0], s.args[1]);
  }
  if (s.name == "odd-bump") {
    expect_args(s, 2);
    return odd_bump_perturbation(s.args[0], s.args[1]);
  }
  throw ConfigError("unknown perturbation '" + s.name + "'");
}

}  // namespace otmap
