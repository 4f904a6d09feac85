#pragma once

#include <cmath>
#include <complex>

#include "polariton/units.hpp"

namespace testing {

inline double circular_distance(double a, double b) {
  double d = std::fmod(std::abs(a - b), 2.0 * polariton::kPi);
  return std::min(d, 2.0 * polariton::kPi - d);
}

inline constexpr double kMaxOrientation = 0.7745966692414834;  // sqrt(3/5)

}  // namespace testing
