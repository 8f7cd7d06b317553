#include "otmap/interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace otmap {

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y,
                             std::vector<double> slope)
    : x_(std::move(x)), y_(std::move(y)), slope_(std::move(slope)) {
  if (x_.size() != y_.size() || x_.size() != slope_.size() || x_.size() < 2)
    throw std::invalid_argument("MonotoneCubic: inconsistent node arrays");
  for (std::size_t i = 1; i < x_.size(); ++i)
    if (!(x_[i] > x_[i - 1]))
      throw std::invalid_argument("MonotoneCubic: nodes not increasing");
  limit_slopes();
}

MonotoneCubic MonotoneCubic::from_points(std::vector<double> x,
                                         std::vector<double> y) {
  const std::size_t n = x.size();
  std::vector<double> m(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (i == 0)
      m[i] = (y[1] - y[0]) / (x[1] - x[0]);
    else if (i + 1 == n)
      m[i] = (y[n - 1] - y[n - 2]) / (x[n - 1] - x[n - 2]);
    else {
      const double dl = (y[i] - y[i - 1]) / (x[i] - x[i - 1]);
      const double dr = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
      m[i] = 0.5 * (dl + dr);
    }
  }
  return MonotoneCubic(std::move(x), std::move(y), std::move(m));
}

void MonotoneCubic::limit_slopes() {
  const std::size_t n = x_.size();
  for (std::size_t i = 0; i < n; ++i) {
    double cap = 0.0;
    if (i > 0)
      cap = 3.0 * (y_[i] - y_[i - 1]) / (x_[i] - x_[i - 1]);
    if (i + 1 < n) {
      const double c = 3.0 * (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
      cap = (i > 0) ? std::min(cap, c) : c;
    }
    slope_[i] = std::clamp(slope_[i], 0.0, std::max(cap, 0.0));
  }
}

std::size_t MonotoneCubic::panel(double t) const {
  const auto it = std::upper_bound(x_.begin(), x_.end(), t);
  const std::size_t k = static_cast<std::size_t>(it - x_.begin());
  if (k == 0) return 0;
  if (k >= x_.size()) return x_.size() - 2;
  return k - 1;
}

double MonotoneCubic::operator()(double t) const {
  if (t <= x_.front()) return y_.front() + slope_.front() * (t - x_.front());
  if (t >= x_.back()) return y_.back() + slope_.back() * (t - x_.back());
  const std::size_t k = panel(t);
  const double h = x_[k + 1] - x_[k];
  const double s = (t - x_[k]) / h;
  const double s2 = s * s, s3 = s2 * s;
  return y_[k] * (2 * s3 - 3 * s2 + 1) + h * slope_[k] * (s3 - 2 * s2 + s) +
         y_[k + 1] * (-2 * s3 + 3 * s2) + h * slope_[k + 1] * (s3 - s2);
}

double MonotoneCubic::derivative(double t) const {
  if (t <= x_.front()) return slope_.front();
  if (t >= x_.back()) return slope_.back();
  const std::size_t k = panel(t);
  const double h = x_[k + 1] - x_[k];
  const double s = (t - x_[k]) / h;
  const double s2 = s * s;
  return (y_[k] * (6 * s2 - 6 * s) / h + slope_[k] * (3 * s2 - 4 * s + 1) +
          y_[k + 1] * (6 * s - 6 * s2) / h + slope_[k + 1] * (3 * s2 - 2 * s));
}

}  // namespace otmap
