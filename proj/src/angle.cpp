#include "gtforge/angle.hpp"

#include <cmath>

namespace gtforge {

double wrap_angle(double rad) {
  double r = std::remainder(rad, kTwoPi);  // in [-pi, pi]
  if (r <= -kPi) r += kTwoPi;
  return r;
}

}  // namespace gtforge
