#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "sqmc/basis_eval.hpp"
#include "sqmc/degree_kernel.hpp"
#include "sqmc/orthobasis.hpp"
#include "sqmc/rng.hpp"
#include "support/shifted_legendre.hpp"

using namespace sqmc;

TEST_CASE("rodrigues_polynomial pinned expansions") {
  const auto c = rodrigues_polynomial(MultiIndex({0, 0, 0}));
  CHECK(c.term_count() == 1);
  CHECK(c.coeff(MultiIndex({0, 0, 0})) == Rational(1));

  const auto p1 = rodrigues_polynomial(MultiIndex({1}));
  CHECK(p1.coeff(MultiIndex({0})) == Rational(1));
  CHECK(p1.coeff(MultiIndex({1})) == Rational(-2));
  CHECK(p1.term_count() == 2);

  const auto p2 = rodrigues_polynomial(MultiIndex({2}));
  CHECK(p2.coeff(MultiIndex({0})) == Rational(2));
  CHECK(p2.coeff(MultiIndex({1})) == Rational(-12));
  CHECK(p2.coeff(MultiIndex({2})) == Rational(12));

  // Total degree is exactly the order of the derivative.
  CHECK(rodrigues_polynomial(MultiIndex({2, 1})).degree() == 3);
}

TEST_CASE("one-dimensional basis is the orthonormal shifted Legendre family") {
  const auto basis = shared_basis(1, 8);
  const BasisEvaluator eval(basis);
  UniformRng rng(5);
  for (int l = 0; l <= 8; ++l) {
    REQUIRE(basis->size_of_degree(l) == 1);
    // Fix the relative sign at one point, then require agreement everywhere.
    const double probe = eval.eval_one(l, 1, SimplexPoint{{0.123}});
    const double sign = probe * oracle::shifted_legendre_orthonormal(l, 0.123) < 0 ? -1.0 : 1.0;
    for (int trial = 0; trial < 50; ++trial) {
      const double x = rng.next_double();
      const double got = eval.eval_one(l, 1, SimplexPoint{{x}});
      const double want = sign * oracle::shifted_legendre_orthonormal(l, x);
      CHECK(std::abs(got - want) <= 1e-12 * std::max(1.0, std::abs(want)));
    }
  }
}

TEST_CASE("basis block shapes") {
  const auto trivial = build_basis(2, 0);
  REQUIRE(trivial.by_degree.size() == 1);
  REQUIRE(trivial.size_of_degree(0) == 1);
  CHECK(trivial.at(0, 1).poly == MultiIndexPolynomial::constant(2, 1));
  CHECK(trivial.at(0, 1).norm_sq == Rational(1));

  const auto basis = shared_basis(2, 3);
  CHECK(basis->size_of_degree(3) == 4);  // binomial(3 + 1, 3)
  CHECK(degree_space_dimension(3, 5) == Integer(21));
}

TEST_CASE("exact orthonormality and zero mean") {
  for (int d = 1; d <= 3; ++d) {
    const int max_degree = d == 3 ? 4 : 6;
    const auto basis = shared_basis(d, max_degree);
    for (int l1 = 0; l1 <= max_degree; ++l1) {
      for (int k1 = 1; k1 <= basis->size_of_degree(l1); ++k1) {
        const auto& f1 = basis->at(l1, k1);
        for (int l2 = l1; l2 <= max_degree; ++l2) {
          for (int k2 = l2 == l1 ? k1 : 1; k2 <= basis->size_of_degree(l2); ++k2) {
            const auto& f2 = basis->at(l2, k2);
            const Rational ip = poly_inner_product(f1.poly, f2.poly);
            if (l1 == l2 && k1 == k2) {
              CHECK(ip == f1.norm_sq);  // unit norm once the stored factor is folded in
            } else {
              CHECK(ip == 0);
            }
          }
        }
        if (l1 >= 1) {
          const Rational mean =
              polynomial_integral(f1.poly) * Rational(factorial(static_cast<unsigned long>(d)));
          CHECK(mean == 0);
        }
      }
    }
  }
}

TEST_CASE("degree kernel does not depend on the within-degree ordering") {
  const auto forward = std::make_shared<OrthonormalBasis>(build_basis(2, 5));
  const auto reversed =
      std::make_shared<OrthonormalBasis>(build_basis(2, 5, WithinDegreeOrder::Reversed));
  // The reversed run must produce genuinely different elements...
  CHECK(forward->at(2, 1).poly != reversed->at(2, 1).poly);

  const BasisEvaluator ef(forward), er(reversed);
  UniformRng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = uniform_sample(2, 1, rng.next_u64())[0];
    const auto y = uniform_sample(2, 1, rng.next_u64())[0];
    for (int l = 0; l <= 5; ++l) {
      // ...while the summed products stay put.
      CHECK(std::abs(degree_kernel_direct(ef, l, x, y) - degree_kernel_direct(er, l, x, y)) <=
            1e-10);
    }
  }
}

TEST_CASE("gram-schmidt keeps the constant normalized") {
  const auto basis = shared_basis(3, 2);
  CHECK(basis->at(0, 1).poly == MultiIndexPolynomial::constant(3, 1));
  CHECK(basis->at(0, 1).norm_sq == Rational(1));
}

TEST_CASE("json round trip is exact and hash-checked") {
  const auto basis = build_basis(2, 4);
  const std::string text = basis_to_json(basis);
  const auto loaded = basis_from_json(text);
  REQUIRE(loaded.max_degree == basis.max_degree);
  for (int l = 0; l <= 4; ++l) {
    REQUIRE(loaded.size_of_degree(l) == basis.size_of_degree(l));
    for (int k = 1; k <= basis.size_of_degree(l); ++k) {
      CHECK(loaded.at(l, k).poly == basis.at(l, k).poly);
      CHECK(loaded.at(l, k).norm_sq == basis.at(l, k).norm_sq);
    }
  }

  // A corrupted payload must not load silently.
  std::string tampered = text;
  const auto pos = tampered.find("\"norm_sq\":\"");
  REQUIRE(pos != std::string::npos);
  tampered.replace(pos + 11, 1, "7");
  CHECK_THROWS(basis_from_json(tampered));

  const auto path = std::filesystem::temp_directory_path() / "sqmc_basis_roundtrip.json";
  save_basis(basis, path.string());
  const auto reloaded = load_basis(path.string());
  CHECK(reloaded.at(4, 2).poly == basis.at(4, 2).poly);
  std::filesystem::remove(path);
}

TEST_CASE("evaluator matches exact polynomial evaluation") {
  const auto basis = shared_basis(2, 6);
  const BasisEvaluator eval(basis);
  UniformRng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const auto x = uniform_sample(2, 1, rng.next_u64())[0];
    const auto all = eval.eval_all(x);
    for (int l = 0; l <= 6; ++l) {
      for (int k = 1; k <= basis->size_of_degree(l); ++k) {
        const auto& f = basis->at(l, k);
        const double scale = std::sqrt(to_double(f.norm_sq));
        const double expected = poly_eval(f.poly, x) / scale;
        const double got = all[static_cast<std::size_t>(eval.degree_offset(l) + k - 1)];
        CHECK(got == doctest::Approx(expected).epsilon(1e-11));
        CHECK(eval.eval_one(l, k, x) == doctest::Approx(expected).epsilon(1e-11));
      }
    }
  }
  CHECK_THROWS_AS(eval.eval_one(7, 1, SimplexPoint{{0.1, 0.1}}), std::out_of_range);
  CHECK_THROWS_AS(eval.eval_one(1, 3, SimplexPoint{{0.1, 0.1}}), std::out_of_range);
}

TEST_CASE("gram-schmidt flags an impossible zero vector as internal") {
  // Feeding a degree block whose polynomials are dependent is not reachable
  // through the public path; the guard is exercised through the block-size
  // check instead: a broken dimension count must throw, not mis-build.
  CHECK_THROWS_AS(build_basis(0, 2), std::invalid_argument);
  CHECK_THROWS_AS(build_basis(2, -1), std::invalid_argument);
}

TEST_CASE("integrating the degree kernel over one argument gives zero") {
  // Summed form of the zero-mean property: for fixed x,
  // sum_k P_{l,k}(x) * (d! integral of P_{l,k}) vanishes because every
  // factor integral is exactly zero in rational arithmetic.
  const auto basis = shared_basis(2, 6);
  const BasisEvaluator eval(basis);
  const Rational dfact(factorial(2));
  UniformRng rng(64);
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = uniform_sample(2, 1, rng.next_u64())[0];
    for (int l = 1; l <= 6; ++l) {
      double integrated = 0.0;
      for (int k = 1; k <= basis->size_of_degree(l); ++k) {
        const auto& f = basis->at(l, k);
        const Rational mean = polynomial_integral(f.poly) * dfact;
        CHECK(mean == 0);
        integrated += eval.eval_one(l, k, x) * to_double(mean);
      }
      CHECK(integrated == 0.0);
    }
  }
}
