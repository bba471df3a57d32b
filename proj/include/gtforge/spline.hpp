#pragma once

#include <span>
#include <vector>

namespace gtforge {

/// Natural cubic spline (zero second derivative at both ends) through
/// (t_k, y_k). Evaluation outside [t_0, t_n] is the caller's responsibility.
class CubicSpline {
 public:
  CubicSpline() = default;
  /// Requires at least 2 knots with strictly increasing abscissae.
  CubicSpline(std::span<const double> t, std::span<const double> y);

  double value(double t) const;
  double derivative(double t) const;
  double second_derivative(double t) const;

  /// Second derivative at knot k (the solved moment).
  double moment(size_t k) const { return m_[k]; }
  size_t size() const { return t_.size(); }

 private:
  size_t interval(double t) const;

  std::vector<double> t_;
  std::vector<double> y_;
  std::vector<double> m_;  // second derivatives at knots
};

}  // namespace gtforge
