#pragma once

#include "sqmc/basis_eval.hpp"

namespace sqmc {

/// Gegenbauer polynomial C_n^(lambda)(u) by the standard three-term
/// recurrence. Requires |u| <= 1 + 1e-12.
double gegenbauer(int n, double lambda, double u);

/// Degree kernel P_l(x, y): sum over k of P_{l,k}(x) P_{l,k}(y).
/// Invariant under the choice of orthonormal basis within the degree.
double degree_kernel_direct(const BasisEvaluator& eval, int l, const SimplexPoint& x,
                            const SimplexPoint& y);

/// Same kernel through the closed form: a Gegenbauer polynomial of the
/// bilinear sqrt(x_i y_i) form integrated over [-1,1]^{d+1} against the
/// Chebyshev weight. The integrand is a polynomial of degree 2l in each
/// axis, so tensor Gauss-Chebyshev with l+1 nodes per axis is exact.
/// Requires l >= 1 (degree 0 is identically 1).
double degree_kernel_closed(int d, int l, const SimplexPoint& x, const SimplexPoint& y);

/// Exact per-degree bound: (2l + d) binomial(2l + 2d - 1, 2l) / (2^{d+1} d).
/// P_l(x, y) never exceeds it on the simplex.
Rational degree_kernel_bound(int d, int l);

}  // namespace sqmc
