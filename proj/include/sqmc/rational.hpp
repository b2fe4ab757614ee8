#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace sqmc {

/// Exact rational scalar. All polynomial coefficients, inner products and
/// basis norms are kept in this type; doubles appear only at evaluation
/// boundaries.
using Rational = mpq_class;
using Integer = mpz_class;

inline double to_double(const Rational& q) { return q.get_d(); }

Integer factorial(unsigned long n);
Integer binomial(unsigned long n, unsigned long k);

/// Canonical "num/den" form (den omitted when 1). Round-trips exactly.
std::string rational_to_string(const Rational& q);
Rational rational_from_string(const std::string& s);

}  // namespace sqmc
