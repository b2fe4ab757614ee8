#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sqmc/polynomial.hpp"

using namespace sqmc;

TEST_CASE("graded-lex ordering") {
  const MultiIndex a({0, 2});
  const MultiIndex b({1, 0});
  const MultiIndex c({1, 1});
  CHECK(graded_lex_less(b, a));   // degree 1 before degree 2
  CHECK(graded_lex_less(a, c));   // same degree: (0,2) before (1,1)
  CHECK_FALSE(graded_lex_less(a, a));

  const auto deg2 = multi_indices_of_degree(2, 2);
  REQUIRE(deg2.size() == 3);
  CHECK(deg2[0] == MultiIndex({0, 2}));
  CHECK(deg2[1] == MultiIndex({1, 1}));
  CHECK(deg2[2] == MultiIndex({2, 0}));
  CHECK(multi_indices_of_degree(3, 4).size() == 15);  // C(6, 4)
}

TEST_CASE("term bookkeeping never stores zeros") {
  MultiIndexPolynomial p(2);
  p.add_term(MultiIndex({1, 0}), Rational(1, 3));
  p.add_term(MultiIndex({1, 0}), Rational(-1, 3));
  CHECK(p.is_zero());
  p.add_term(MultiIndex({0, 1}), 0);
  CHECK(p.term_count() == 0);

  MultiIndexPolynomial q(2);
  q.add_term(MultiIndex({2, 1}), 5);
  q *= Rational(0);
  CHECK(q.is_zero());
}

TEST_CASE("arithmetic, derivative and evaluation agree with hand algebra") {
  // f = 1 - 2x + x y
  MultiIndexPolynomial f(2);
  f.add_term(MultiIndex({0, 0}), 1);
  f.add_term(MultiIndex({1, 0}), -2);
  f.add_term(MultiIndex({1, 1}), 1);
  CHECK(f.degree() == 2);

  // df/dx = -2 + y
  const auto fx = f.derivative(0);
  CHECK(fx.coeff(MultiIndex({0, 0})) == Rational(-2));
  CHECK(fx.coeff(MultiIndex({0, 1})) == Rational(1));
  CHECK(fx.term_count() == 2);

  const auto sq = f * f;
  const double x[] = {0.25, 0.5};
  CHECK(sq.eval(x) == doctest::Approx(f.eval(x) * f.eval(x)).epsilon(1e-15));

  CHECK_THROWS_AS(f.derivative(2), std::invalid_argument);
  CHECK_THROWS_AS(f + MultiIndexPolynomial::constant(3, 1), std::invalid_argument);
}

TEST_CASE("make_primitive clears denominators and fixes the sign") {
  MultiIndexPolynomial p(1);
  p.add_term(MultiIndex({0}), Rational(2, 3));
  p.add_term(MultiIndex({1}), Rational(-4, 3));
  p.make_primitive();
  // Leading (graded-lex largest) coefficient positive, content 1.
  CHECK(p.coeff(MultiIndex({1})) == Rational(2));
  CHECK(p.coeff(MultiIndex({0})) == Rational(-1));

  MultiIndexPolynomial z(1);
  z.make_primitive();  // no-op on zero
  CHECK(z.is_zero());
}
