#pragma once

#include <cstdint>
#include <vector>

#include "sqmc/polynomial.hpp"

namespace sqmc {

/// Tolerance for membership checks on floating-point simplex coordinates.
inline constexpr double kSimplexTol = 1e-12;

/// Point of the standard unit simplex in R^d: all coordinates nonnegative
/// and summing to at most 1. The barycentric remainder 1 - sum is implied.
struct SimplexPoint {
  std::vector<double> coords;

  SimplexPoint() = default;
  explicit SimplexPoint(std::vector<double> c) : coords(std::move(c)) {}

  int dim() const { return static_cast<int>(coords.size()); }
  double coordinate_sum() const;
  double barycentric_remainder() const { return 1.0 - coordinate_sum(); }

  bool is_valid(double tol = kSimplexTol) const;
  /// Throws std::invalid_argument when dimension or membership fails.
  void validate(int expected_dim, double tol = kSimplexTol) const;
};

/// An m-tuple of simplex points, one per tensor factor.
struct ProductPoint {
  std::vector<SimplexPoint> components;

  int m() const { return static_cast<int>(components.size()); }
  void validate(int expected_d, int expected_m) const;
};

/// i.i.d. uniform points on the d-simplex, by sorted-uniform spacings:
/// d sorted variates per point, consecutive differences as coordinates.
/// Nonnegativity and sum <= 1 hold exactly in floating point.
std::vector<SimplexPoint> uniform_sample(int d, int count, std::uint64_t seed);

ProductPoint uniform_product_point(int d, int m, class UniformRng& rng);

/// Exact moment of a monomial over the unit simplex:
/// integral of x^alpha equals (prod_i alpha_i!) / (|alpha| + d)!.
Rational monomial_integral(const MultiIndex& alpha, int d);

/// Plain integral of f over the simplex (no d! normalization), exact.
Rational polynomial_integral(const MultiIndexPolynomial& f);

/// L2 inner product with the normalized constant weight:
/// d! * integral of f*g over the simplex, exact.
Rational poly_inner_product(const MultiIndexPolynomial& f, const MultiIndexPolynomial& g);

/// Value of f at a simplex point (term summation in graded-lex order).
double poly_eval(const MultiIndexPolynomial& f, const SimplexPoint& x);

}  // namespace sqmc
