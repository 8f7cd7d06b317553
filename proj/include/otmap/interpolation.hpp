#pragma once

#include <vector>

namespace otmap {

/// Piecewise-cubic Hermite interpolant over strictly increasing nodes, with
/// the node slopes limited so that the interpolant is monotone on every
/// panel (Fritsch-Carlson box criterion).  Evaluation outside the node range
/// extends linearly with the end slopes.
class MonotoneCubic {
public:
  MonotoneCubic() = default;

  /// Nodes plus externally supplied slopes (e.g. exact derivatives).  Slopes
  /// are clamped into [0, 3 * min(adjacent secants)].
  MonotoneCubic(std::vector<double> x, std::vector<double> y,
                std::vector<double> slope);

  /// Nodes only; slopes are initialized from the secants and limited.
  static MonotoneCubic from_points(std::vector<double> x,
                                   std::vector<double> y);

  double operator()(double t) const;
  double derivative(double t) const;

  bool empty() const { return x_.empty(); }
  const std::vector<double>& x() const { return x_; }
  const std::vector<double>& y() const { return y_; }
  const std::vector<double>& slope() const { return slope_; }

private:
  void limit_slopes();
  std::size_t panel(double t) const;

  std::vector<double> x_, y_, slope_;
};

}  // namespace otmap
