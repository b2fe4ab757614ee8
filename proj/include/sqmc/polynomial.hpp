#pragma once

#include <map>
#include <span>
#include <string>

#include "sqmc/multi_index.hpp"
#include "sqmc/rational.hpp"

namespace sqmc {

/// Sparse polynomial in d variables with exact rational coefficients.
///
/// Terms are stored in a graded-lex ordered map and never contain a zero
/// coefficient, so iteration order and the term set are canonical for a
/// given polynomial.
class MultiIndexPolynomial {
 public:
  using TermMap = std::map<MultiIndex, Rational>;

  explicit MultiIndexPolynomial(int d) : d_(d) {}

  static MultiIndexPolynomial zero(int d) { return MultiIndexPolynomial(d); }
  static MultiIndexPolynomial constant(int d, const Rational& c);
  static MultiIndexPolynomial monomial(const MultiIndex& idx, const Rational& c);

  int dim() const { return d_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }
  const TermMap& terms() const { return terms_; }

  /// Total degree; 0 for the zero polynomial.
  std::uint32_t degree() const;

  const Rational& coeff(const MultiIndex& idx) const;  // 0 if absent
  void add_term(const MultiIndex& idx, const Rational& c);

  MultiIndexPolynomial& operator+=(const MultiIndexPolynomial& other);
  MultiIndexPolynomial& operator-=(const MultiIndexPolynomial& other);
  MultiIndexPolynomial& operator*=(const Rational& s);

  friend MultiIndexPolynomial operator+(MultiIndexPolynomial a, const MultiIndexPolynomial& b) {
    a += b;
    return a;
  }
  friend MultiIndexPolynomial operator-(MultiIndexPolynomial a, const MultiIndexPolynomial& b) {
    a -= b;
    return a;
  }
  friend MultiIndexPolynomial operator*(MultiIndexPolynomial a, const Rational& s) {
    a *= s;
    return a;
  }
  MultiIndexPolynomial operator*(const MultiIndexPolynomial& other) const;

  /// Partial derivative in variable `axis` (0-based).
  MultiIndexPolynomial derivative(int axis) const;

  /// Value at x (length d), summing terms in graded-lex order.
  double eval(std::span<const double> x) const;

  /// Divides by the content (gcd of integer coefficients after clearing
  /// denominators) and fixes the sign so the graded-lex largest term is
  /// positive. No-op on the zero polynomial.
  void make_primitive();

  bool operator==(const MultiIndexPolynomial&) const = default;

 private:
  int d_;
  TermMap terms_;
};

}  // namespace sqmc
