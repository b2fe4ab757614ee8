#pragma once

#include "sqmc/polynomial.hpp"

namespace sqmc {

/// The second-order operator whose eigenfunctions are the orthogonal
/// polynomials on the simplex:
///
///   sum_i x_i(1-x_i) d^2/dx_i^2  -  2 sum_{i<j} x_i x_j d^2/dx_i dx_j
///   + sum_i (1 - (d+1) x_i) d/dx_i
///
/// Applied exactly in rational arithmetic. A degree-l orthogonal
/// polynomial maps to -l(l+d) times itself.
MultiIndexPolynomial apply_nabla(const MultiIndexPolynomial& f);

}  // namespace sqmc
