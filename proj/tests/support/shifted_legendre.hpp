#pragma once

// Classical shifted-Legendre reference, independent of the library's basis
// pipeline: the three-term recurrence on [-1, 1] composed with u = 2x - 1.
// The L2(0,1)-orthonormal version carries the sqrt(2l+1) factor.

#include <cmath>

namespace oracle {

inline double legendre(int l, double u) {
  if (l == 0) return 1.0;
  if (l == 1) return u;
  double prev = 1.0, cur = u;
  for (int k = 2; k <= l; ++k) {
    const double next = ((2.0 * k - 1.0) * u * cur - (k - 1.0) * prev) / k;
    prev = cur;
    cur = next;
  }
  return cur;
}

inline double shifted_legendre(int l, double x) { return legendre(l, 2.0 * x - 1.0); }

inline double shifted_legendre_orthonormal(int l, double x) {
  return std::sqrt(2.0 * l + 1.0) * shifted_legendre(l, x);
}

}  // namespace oracle
