#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sqmc/tract.hpp"

using namespace sqmc;

namespace {

const KernelConstants& consts_24() {
  static KernelConstants consts = [] {
    KernelParams p;
    p.d = 2;
    p.r = 4.0;
    p.gamma = 1.0;
    const KernelEvaluator kernel(p);
    return compute_kernel_constants(kernel, 1.0);
  }();
  return consts;
}

}  // namespace

TEST_CASE("family construction and validation") {
  CHECK(WeightFamily::power_law(2.0, 1.5).gamma(4) == doctest::Approx(2.0 / 8.0));
  CHECK(WeightFamily::constant(0.5).gamma(100) == 0.5);
  CHECK(WeightFamily::log_decay(1.0).gamma(1) == doctest::Approx(1.0 / std::log(2.0)));
  CHECK_THROWS_AS(WeightFamily::power_law(1.0, -0.5), std::invalid_argument);
  CHECK_THROWS_AS(WeightFamily::power_law(0.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(WeightFamily::custom({0.5, -0.1}), std::invalid_argument);
  CHECK_THROWS_AS(WeightFamily::custom({}), std::invalid_argument);

  const auto schedule = WeightFamily::power_law(1.0, 1.0).schedule(4);
  CHECK(schedule.gammas[3] == doctest::Approx(0.25));
  CHECK(schedule.gamma_star() == doctest::Approx(1.0));
}

TEST_CASE("classification of the built-in families") {
  const auto strong = classify(WeightFamily::power_law(1.0, 2.0));
  CHECK(strong.strong_polynomial);
  CHECK(strong.polynomial);
  CHECK(strong.weak);
  CHECK(strong.limit_sum == doctest::Approx(M_PI * M_PI / 6.0).epsilon(1e-6));
  CHECK(strong.beta == 0.0);

  const auto log_growth = classify(WeightFamily::power_law(1.0, 1.0));
  CHECK_FALSE(log_growth.strong_polynomial);
  CHECK(log_growth.polynomial);
  CHECK(log_growth.weak);
  CHECK(log_growth.beta == doctest::Approx(1.0));

  const auto half = classify(WeightFamily::power_law(1.0, 0.5));
  CHECK_FALSE(half.strong_polynomial);
  CHECK_FALSE(half.polynomial);
  CHECK(half.weak);

  const auto none = classify(WeightFamily::constant(0.5));
  CHECK_FALSE(none.strong_polynomial);
  CHECK_FALSE(none.polynomial);
  CHECK_FALSE(none.weak);
  CHECK(none.limit_ratio_m == doctest::Approx(0.5));

  // Exponent zero collapses onto the constant family.
  const auto zero_exp = classify(WeightFamily::power_law(0.5, 0.0));
  CHECK_FALSE(zero_exp.weak);
  CHECK(zero_exp.limit_ratio_m == doctest::Approx(0.5));

  const auto slow = classify(WeightFamily::log_decay(1.0));
  CHECK_FALSE(slow.strong_polynomial);
  CHECK_FALSE(slow.polynomial);
  CHECK(slow.weak);

  CHECK_FALSE(strong.empirical);
}

TEST_CASE("every verdict is nested") {
  const std::vector<WeightFamily> families = {
      WeightFamily::power_law(1.0, 2.0), WeightFamily::power_law(1.0, 1.0),
      WeightFamily::power_law(1.0, 0.5), WeightFamily::power_law(2.0, 0.0),
      WeightFamily::constant(0.1),       WeightFamily::log_decay(0.7),
  };
  for (const auto& family : families) {
    const auto v = classify(family);
    CHECK((!v.strong_polynomial || v.polynomial));
    CHECK((!v.polynomial || v.weak));
  }
}

TEST_CASE("custom tables are classified empirically") {
  std::vector<double> convergent, flat;
  for (int j = 1; j <= 2048; ++j) {
    convergent.push_back(1.0 / (static_cast<double>(j) * j));
    flat.push_back(0.5);
  }
  const auto v1 = classify(WeightFamily::custom(convergent));
  CHECK(v1.empirical);
  CHECK(v1.strong_polynomial);
  CHECK(v1.weak);

  const auto v2 = classify(WeightFamily::custom(flat));
  CHECK(v2.empirical);
  CHECK_FALSE(v2.strong_polynomial);
  CHECK_FALSE(v2.polynomial);
  CHECK_FALSE(v2.weak);

  std::vector<double> harmonic;
  for (int j = 1; j <= 2048; ++j) harmonic.push_back(1.0 / j);
  const auto v3 = classify(WeightFamily::custom(harmonic));
  CHECK_FALSE(v3.strong_polynomial);
  CHECK(v3.polynomial);

  CHECK_THROWS_AS(classify(WeightFamily::custom({1.0, 1.0})), std::invalid_argument);
}

TEST_CASE("bound curves are consistent with the verdicts") {
  std::vector<int> ms;
  for (int m = 1; m <= 1024; m *= 2) ms.push_back(m);
  const double eps = 0.25;

  SUBCASE("strongly tractable family has a bounded curve") {
    const auto family = WeightFamily::power_law(1.0, 2.0);
    const auto curve = bound_curve(family, eps, ms, consts_24());
    REQUIRE(curve.verdict.strong_polynomial);
    const double cap =
        std::exp(consts_24().c_dr * curve.verdict.limit_sum) / (eps * eps) * (1.0 + 1e-9);
    for (const auto& row : curve.rows) {
      CHECK(row.n_upper <= cap);
      CHECK(row.upper_times_eps_sq == doctest::Approx(row.n_upper * eps * eps));
      CHECK(row.n_lower <= row.n_upper);
    }
    // The eps-independence of n_upper * eps^2.
    const auto tighter = bound_curve(family, eps / 2.0, ms, consts_24());
    for (std::size_t i = 0; i < curve.rows.size(); ++i) {
      CHECK(curve.rows[i].upper_times_eps_sq ==
            doctest::Approx(tighter.rows[i].upper_times_eps_sq).epsilon(1e-12));
    }
  }

  SUBCASE("log-growth family: slope of log n_upper matches c_dr * beta") {
    const auto family = WeightFamily::power_law(1.0, 1.0);
    const auto curve = bound_curve(family, eps, ms, consts_24());
    const auto& a = curve.rows[curve.rows.size() - 2];
    const auto& b = curve.rows.back();
    const double slope = (std::log(b.n_upper) - std::log(a.n_upper)) /
                         (std::log(b.m + 1.0) - std::log(a.m + 1.0));
    const double want = consts_24().c_dr * curve.verdict.beta;
    CHECK(std::abs(slope - want) <= 0.05 * want);
  }

  SUBCASE("constant weights grow the lower bound geometrically in m") {
    const auto family = WeightFamily::constant(0.5);
    const auto curve = bound_curve(family, eps, ms, consts_24());
    if (consts_24().gtilde_min_estimate > 0.0) {
      for (std::size_t i = 1; i < curve.rows.size(); ++i) {
        CHECK(std::log(curve.rows[i].n_lower) > std::log(curve.rows[i - 1].n_lower));
      }
    }
  }

  SUBCASE("single factor reduces to the one-dimensional bounds") {
    const auto family = WeightFamily::constant(0.5);
    const auto curve = bound_curve(family, eps, {1}, consts_24());
    CHECK(curve.rows[0].n_upper ==
          doctest::Approx((1.0 + 0.5 * consts_24().c_dr) / (eps * eps)).epsilon(1e-12));
  }

  CHECK_THROWS_AS(bound_curve(WeightFamily::constant(0.5), 1.5, ms, consts_24()),
                  std::invalid_argument);
}

TEST_CASE("curve serialization") {
  const auto curve = bound_curve(WeightFamily::power_law(1.0, 2.0), 0.5, {1, 2, 4}, consts_24());
  const auto csv = bound_curve_to_csv(curve);
  CHECK(csv.find("m,sum_gamma,n_upper,n_lower") == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);  // header + 3 rows

  const auto verdict_json = verdict_to_json(curve.verdict);
  CHECK(verdict_json.find("\"strong_polynomial\": true") != std::string::npos);
  const auto inf_json = verdict_to_json(classify(WeightFamily::constant(1.0)));
  CHECK(inf_json.find("\"limit_sum\": \"inf\"") != std::string::npos);
}
