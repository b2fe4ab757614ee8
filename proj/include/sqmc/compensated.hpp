#pragma once

#include <cmath>

namespace sqmc {

/// Neumaier compensated accumulator; the running error stays at a few
/// units in the last place regardless of term count.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      carry += (sum - t) + x;
    } else {
      carry += (x - t) + sum;
    }
    sum = t;
  }

  double value() const { return sum + carry; }
};

}  // namespace sqmc
