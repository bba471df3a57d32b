#include "gtforge/spline.hpp"

#include <algorithm>

#include "gtforge/error.hpp"

namespace gtforge {

CubicSpline::CubicSpline(std::span<const double> t, std::span<const double> y)
    : t_(t.begin(), t.end()), y_(y.begin(), y.end()), m_(t.size(), 0.0) {
  const size_t n = t_.size();
  if (n != y_.size()) throw Error(ErrorCode::LengthMismatch, "spline abscissae and ordinates differ in length");
  if (n < 2) throw Error(ErrorCode::TooFewSamples, "spline needs at least 2 knots");
  for (size_t i = 1; i < n; ++i) {
    if (!(t_[i] > t_[i - 1])) throw Error(ErrorCode::NonMonotonicTimestamps, "spline knots not increasing");
  }
  if (n == 2) return;

  // Tridiagonal system for interior moments, solved with the Thomas algorithm.
  const size_t m = n - 2;
  std::vector<double> diag(m), upper(m), rhs(m);
  for (size_t i = 0; i < m; ++i) {
    const double h0 = t_[i + 1] - t_[i];
    const double h1 = t_[i + 2] - t_[i + 1];
    diag[i] = 2.0 * (h0 + h1);
    upper[i] = h1;
    rhs[i] = 6.0 * ((y_[i + 2] - y_[i + 1]) / h1 - (y_[i + 1] - y_[i]) / h0);
  }
  for (size_t i = 1; i < m; ++i) {
    const double lower = t_[i + 1] - t_[i];
    const double w = lower / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  m_[m] = rhs[m - 1] / diag[m - 1];
  for (size_t i = m - 1; i-- > 0;) {
    m_[i + 1] = (rhs[i] - upper[i] * m_[i + 2]) / diag[i];
  }
}

size_t CubicSpline::interval(double t) const {
  auto it = std::upper_bound(t_.begin(), t_.end(), t);
  if (it == t_.begin()) return 0;
  size_t k = static_cast<size_t>(it - t_.begin()) - 1;
  return std::min(k, t_.size() - 2);
}

double CubicSpline::value(double t) const {
  const size_t k = interval(t);
  if (t == t_[k]) return y_[k];
  if (t == t_[k + 1]) return y_[k + 1];
  const double h = t_[k + 1] - t_[k];
  const double a = (t_[k + 1] - t) / h;
  const double b = (t - t_[k]) / h;
  return a * y_[k] + b * y_[k + 1] +
         ((a * a * a - a) * m_[k] + (b * b * b - b) * m_[k + 1]) * (h * h) / 6.0;
}

double CubicSpline::derivative(double t) const {
  const size_t k = interval(t);
  const double h = t_[k + 1] - t_[k];
  const double a = (t_[k + 1] - t) / h;
  const double b = (t - t_[k]) / h;
  return (y_[k + 1] - y_[k]) / h + ((3.0 * b * b - 1.0) * m_[k + 1] - (3.0 * a * a - 1.0) * m_[k]) * h / 6.0;
}

double CubicSpline::second_derivative(double t) const {
  const size_t k = interval(t);
  const double h = t_[k + 1] - t_[k];
  const double a = (t_[k + 1] - t) / h;
  const double b = (t - t_[k]) / h;
  return a * m_[k] + b * m_[k + 1];
}

}  // namespace gtforge
