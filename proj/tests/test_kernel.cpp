#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <map>

#include "sqmc/compensated.hpp"
#include "sqmc/kernel.hpp"
#include "sqmc/rng.hpp"
#include "support/shifted_legendre.hpp"

using namespace sqmc;

namespace {

KernelParams params_for(int d, double r, double gamma, int cap = 0, double tol = 1e-12) {
  KernelParams p;
  p.d = d;
  p.r = r;
  p.gamma = gamma;
  p.truncation.max_degree = cap;
  p.truncation.tail_tolerance = tol;
  return p;
}

}  // namespace

TEST_CASE("smoothness precondition is enforced everywhere") {
  CHECK_THROWS_AS(params_for(2, 3.0, 1.0).validate(), std::domain_error);
  CHECK_THROWS_AS(KernelEvaluator(params_for(1, 2.0, 1.0)), std::domain_error);
  CHECK_THROWS_AS(c_series(2, 3.0), std::domain_error);
  CHECK_THROWS_AS(s_series(1, 2.0), std::domain_error);
  CHECK_THROWS_AS(params_for(2, 4.0, -1.0).validate(), std::invalid_argument);
}

TEST_CASE("truncation policy resolves against the analytic tail") {
  CHECK(std::isinf(analytic_series_tail(1, 3.0, 0)));
  // Decreasing in the degree; consistent with the closed form M_d L^{1-s}/(s-1).
  double prev = analytic_series_tail(2, 4.0, 1);
  for (int l = 2; l <= 20; ++l) {
    const double cur = analytic_series_tail(2, 4.0, l);
    CHECK(cur < prev);
    prev = cur;
  }
  CHECK(analytic_series_tail(2, 4.0, 10) ==
        doctest::Approx(20.0 * std::pow(10.0, -3.0) / 3.0).epsilon(1e-12));

  TruncationPolicy loose{1e-2, 0};
  TruncationPolicy tight{1e-12, 0};
  CHECK(resolve_truncation_degree(2, 4.0, loose) < resolve_truncation_degree(2, 4.0, tight));
  CHECK(resolve_truncation_degree(2, 4.0, tight) == 12);  // cap binds
  CHECK(resolve_truncation_degree(1, 8.0, {1e-10, 0}) < 12);

  const KernelEvaluator kernel(params_for(2, 4.0, 1.0));
  CHECK(kernel.truncation_degree() == 12);
  CHECK(kernel.effective_tail_bound() ==
        doctest::Approx(analytic_series_tail(2, 4.0, 12)).epsilon(1e-15));
}

TEST_CASE("g matches the Legendre oracle sum in one dimension") {
  const KernelEvaluator kernel(params_for(1, 3.0, 1.0));
  const int L = kernel.truncation_degree();
  UniformRng rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    const double x = rng.next_double();
    const double y = rng.next_double();
    CompensatedSum want;
    for (int l = 1; l <= L; ++l) {
      want.add((2.0 * l + 1.0) * oracle::shifted_legendre(l, x) *
               oracle::shifted_legendre(l, y) / std::pow(l * (l + 1.0), 3.0));
    }
    CHECK(kernel.g(SimplexPoint{{x}}, SimplexPoint{{y}}) ==
          doctest::Approx(want.value()).epsilon(1e-11));
  }
}

TEST_CASE("kernel symmetry, majorant and diagonal positivity") {
  const KernelEvaluator kernel(params_for(2, 4.0, 0.5));
  const double c = c_series(2, 4.0);
  const double budget = c + kernel.effective_tail_bound();
  UniformRng rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const auto x = uniform_sample(2, 1, rng.next_u64())[0];
    const auto y = uniform_sample(2, 1, rng.next_u64())[0];
    const double gxy = kernel.g(x, y);
    CHECK(std::abs(gxy - kernel.g(y, x)) <= 1e-12);
    CHECK(std::abs(gxy) <= budget);
    CHECK(kernel.g_tilde(x) >= 0.0);  // sum of squares
    CHECK(kernel.k1(x, x) <= 1.0 + kernel.params().gamma * budget);
  }
}

TEST_CASE("reproducing property of the truncated kernel") {
  // Expand K1(., y) in monomials (float coefficients), integrate against
  // each basis element exactly, and compare with P_{l,k}(y) / B(l).
  const int d = 2;
  const double r = 4.0, gamma = 0.7;
  const KernelEvaluator kernel(params_for(d, r, gamma, 6));
  const auto& eval = kernel.basis_eval();
  const auto& basis = eval.basis();
  const SimplexPoint y{{0.31, 0.22}};

  std::map<MultiIndex, double> k1_poly;  // as a polynomial in x
  k1_poly[MultiIndex::zeros(d)] = 1.0;
  for (int l = 1; l <= kernel.truncation_degree(); ++l) {
    const double w = gamma * std::pow(static_cast<double>(l) * (l + d), -r);
    for (int k = 1; k <= basis.size_of_degree(l); ++k) {
      const auto& f = basis.at(l, k);
      const double scale = std::sqrt(to_double(f.norm_sq));
      const double factor = w * eval.eval_one(l, k, y) / scale;
      for (const auto& [idx, coeff] : f.poly.terms()) {
        k1_poly[idx] += factor * to_double(coeff);
      }
    }
  }
  // Sanity: the expansion reproduces pointwise kernel values.
  const SimplexPoint probe{{0.11, 0.4}};
  double at_probe = 0.0;
  for (const auto& [idx, coeff] : k1_poly) {
    double mono = coeff;
    for (int i = 0; i < d; ++i) {
      for (std::uint32_t e = 0; e < idx.e[static_cast<std::size_t>(i)]; ++e) {
        mono *= probe.coords[static_cast<std::size_t>(i)];
      }
    }
    at_probe += mono;
  }
  CHECK(at_probe == doctest::Approx(kernel.k1(probe, y)).epsilon(1e-10));

  const double dfact = to_double(Rational(factorial(d)));
  for (int l = 0; l <= kernel.truncation_degree(); ++l) {
    for (int k = 1; k <= basis.size_of_degree(l); ++k) {
      const auto& f = basis.at(l, k);
      const double scale = std::sqrt(to_double(f.norm_sq));
      CompensatedSum coefficient;  // d! integral of K1(., y) P_{l,k}
      for (const auto& [alpha, ca] : k1_poly) {
        for (const auto& [beta, cb] : f.poly.terms()) {
          MultiIndex sum = alpha;
          for (int i = 0; i < d; ++i) sum.e[static_cast<std::size_t>(i)] += beta.e[static_cast<std::size_t>(i)];
          coefficient.add(ca * (to_double(cb) / scale) * to_double(monomial_integral(sum, d)));
        }
      }
      const double got = dfact * coefficient.value();
      const double b_weight =
          l == 0 ? 1.0 : std::pow(static_cast<double>(l) * (l + d), r) / gamma;
      const double want = eval.eval_one(l, k, y) / b_weight;
      CHECK(got == doctest::Approx(want).epsilon(1e-9).scale(1.0));
    }
  }
}

TEST_CASE("series constants against independent partial sums") {
  // One dimension, r = 3: b_l = (2l+1)^2, eigenvalue l(l+1).
  CompensatedSum c_oracle;
  for (long l = 1; l <= 200000; ++l) {
    c_oracle.add(std::pow(2.0 * l + 1.0, 2.0) / std::pow(l * (l + 1.0), 3.0));
  }
  CHECK(c_series(1, 3.0) == doctest::Approx(c_oracle.value()).epsilon(1e-9));
  CHECK(c_series(1, 3.0, 1e-6) == doctest::Approx(c_oracle.value()).epsilon(1e-5));

  // First term dominates: partial sum at l=1 is 9/8.
  CHECK(c_series(1, 3.0) > 9.0 / 8.0);

  CompensatedSum s_oracle;
  for (long l = 1; l <= 200000; ++l) s_oracle.add(1.0 / std::pow(l * (l + 1.0), 3.0));
  CHECK(s_series(1, 3.0) == doctest::Approx(s_oracle.value()).epsilon(1e-9));
  CHECK(s_series(1, 3.0) == doctest::Approx(0.13039559891064).epsilon(1e-10));

  CHECK(c_series(2, 4.0) > c_series(2, 6.0));  // term-wise monotone in r
  for (int d = 1; d <= 3; ++d) {
    const double r = d + 2.0;
    CHECK(s_series(d, r) <= c_series(d, r));
  }
}

TEST_CASE("trace identity: the mean of the diagonal tail is the s series") {
  const KernelEvaluator kernel(params_for(1, 3.0, 1.0));
  // The truncated diagonal integrates to the truncated s series exactly; the
  // MC oracle sees that value plus noise.
  CompensatedSum s_trunc;
  for (int l = 1; l <= kernel.truncation_degree(); ++l) {
    s_trunc.add(1.0 / std::pow(l * (l + 1.0), 3.0));
  }
  UniformRng rng(20240803);
  const std::int64_t samples = 400000;
  CompensatedSum acc, acc_sq;
  for (std::int64_t s = 0; s < samples; ++s) {
    const auto x = uniform_product_point(1, 1, rng);
    const double v = kernel.g_tilde(x.components[0]);
    acc.add(v);
    acc_sq.add(v * v);
  }
  const double mean = acc.value() / static_cast<double>(samples);
  const double var = std::max(0.0, acc_sq.value() / samples - mean * mean);
  const double se = std::sqrt(var / static_cast<double>(samples));
  CHECK(std::abs(mean - s_trunc.value()) <= 4.0 * se);
  // And the full series sits within the truncation budget of the truncated one.
  CHECK(std::abs(s_series(1, 3.0) - s_trunc.value()) <= kernel.effective_tail_bound());
}

TEST_CASE("extrema estimates bracket sampled values") {
  const KernelEvaluator kernel(params_for(1, 3.0, 1.0));
  GridSearchConfig grid;
  const GExtrema ext = estimate_g_extrema(kernel, grid);
  const double c = c_series(1, 3.0);
  CHECK(ext.min_value >= -c - kernel.effective_tail_bound());
  CHECK(ext.max_value <= c + kernel.effective_tail_bound());
  CHECK(ext.min_value < 0.0);
  CHECK(ext.max_value > 0.0);

  UniformRng rng(77);
  for (int trial = 0; trial < 10000; ++trial) {
    const double v = kernel.g(SimplexPoint{{rng.next_double()}}, SimplexPoint{{rng.next_double()}});
    CHECK(v >= ext.min_value - 1e-9);
    CHECK(v <= ext.max_value + 1e-9);
  }

  // Dense-grid oracle for the diagonal minimum.
  double brute = HUGE_VAL;
  for (int i = 0; i <= 10000; ++i) {
    brute = std::min(brute, kernel.g_tilde(SimplexPoint{{i / 10000.0}}));
  }
  const double est = estimate_gtilde_min(kernel, grid);
  CHECK(est >= -1e-10);
  CHECK(est <= kernel.g_tilde(SimplexPoint{{0.5}}));
  CHECK(std::abs(est - brute) <= 1e-6);
}

TEST_CASE("weight shrink factor") {
  CHECK(b_factor(0.5, -4.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(b_factor(2.0, -0.1) == 1.0);
  CHECK(b_factor(3.0, 0.2) == 1.0);
  CHECK_THROWS_AS(b_factor(0.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(b_factor(1.0, HUGE_VAL), std::invalid_argument);
}

TEST_CASE("shrunk weights make the kernel nonnegative") {
  const double gamma = 0.8;
  const KernelEvaluator kernel(params_for(2, 4.0, gamma));
  const auto consts = compute_kernel_constants(kernel, gamma);
  CHECK(consts.gtilde_min_estimate >= -1e-10);
  CHECK(-consts.c_dr <= consts.g_min_estimate);
  CHECK(consts.g_min_estimate <= consts.g_max_estimate);
  CHECK(consts.g_max_estimate <= consts.c_dr);
  CHECK(consts.b_dr > 0.0);
  CHECK(consts.b_dr <= 1.0);

  const double eta = consts.b_dr * gamma;
  UniformRng rng(99);
  std::vector<SimplexPoint> pts;
  for (int i = 0; i < 30; ++i) pts.push_back(uniform_sample(2, 1, rng.next_u64())[0]);
  for (const auto& x : pts) {
    for (const auto& y : pts) {
      CHECK(1.0 + eta * kernel.g(x, y) >= -1e-10);
    }
  }
}

TEST_CASE("kernel gram matrices are positive semidefinite") {
  const KernelEvaluator kernel(params_for(2, 4.0, 0.5));
  UniformRng rng(5);
  const int n = 30;
  Eigen::MatrixXd gram(n, n);
  std::vector<SimplexPoint> pts;
  for (int i = 0; i < n; ++i) pts.push_back(uniform_sample(2, 1, rng.next_u64())[0]);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) gram(i, j) = kernel.k1(pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(j)]);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  CHECK(eig.eigenvalues().minCoeff() >= -1e-8);
}

TEST_CASE("doubling the truncation degree moves g within the tail budget") {
  const KernelEvaluator coarse(params_for(2, 4.0, 1.0, 6));
  const KernelEvaluator fine(params_for(2, 4.0, 1.0, 12));
  const double budget = 2.0 * coarse.effective_tail_bound();
  UniformRng rng(55);
  for (int trial = 0; trial < 100; ++trial) {
    const auto x = uniform_sample(2, 1, rng.next_u64())[0];
    const auto y = uniform_sample(2, 1, rng.next_u64())[0];
    CHECK(std::abs(fine.g(x, y) - coarse.g(x, y)) <= budget);
  }
}

TEST_CASE("product kernel over factors") {
  const KernelEvaluator kernel(params_for(2, 4.0, 0.5));
  const auto schedule = WeightSchedule::uniform(2, 0.5);
  UniformRng rng(3);
  const auto X = uniform_product_point(2, 2, rng);
  const auto Y = uniform_product_point(2, 2, rng);

  const double factor0 = 1.0 + 0.5 * kernel.g(X.components[0], Y.components[0]);
  const double factor1 = 1.0 + 0.5 * kernel.g(X.components[1], Y.components[1]);
  CHECK(kernel.km(X, Y, schedule) == doctest::Approx(factor0 * factor1).epsilon(1e-13));

  // Single factor degenerates to the plain kernel.
  const auto one = WeightSchedule::uniform(1, 0.5);
  ProductPoint Xa{{X.components[0]}}, Ya{{Y.components[0]}};
  CHECK(kernel.km(Xa, Ya, one) == doctest::Approx(kernel.k1(X.components[0], Y.components[0]))
                                      .epsilon(1e-13));

  // Vanishingly small weights push the product to 1.
  const auto tiny = WeightSchedule::uniform(2, 1e-15);
  CHECK(kernel.km(X, Y, tiny) == doctest::Approx(1.0).epsilon(1e-12));

  CHECK(kernel.km(X, X, schedule) >= 1.0);  // diagonal factors are 1 + gamma g_tilde

  ProductPoint bad{{X.components[0]}};
  CHECK_THROWS_AS(kernel.km(bad, Y, schedule), std::invalid_argument);
}

TEST_CASE("constants report is serializable with provenance") {
  const KernelEvaluator kernel(params_for(1, 3.0, 1.0));
  const auto consts = compute_kernel_constants(kernel, 1.0);
  const auto text = kernel_constants_to_json(consts);
  CHECK(text.find("\"c_dr\"") != std::string::npos);
  CHECK(text.find("\"tail_bound_effective\"") != std::string::npos);
  CHECK(text.find("\"grid_pitch\"") != std::string::npos);
  CHECK(consts.M_dr == doctest::Approx(consts.b_dr * consts.gtilde_min_estimate * 1.0));
  CHECK(consts.alpha_dr <= 1.0);
  CHECK(consts.alpha_dr > 0.0);
}
