#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sqmc/rng.hpp"
#include "sqmc/search.hpp"

using namespace sqmc;

namespace {

KernelParams params_for(int d, double r, double gamma) {
  KernelParams p;
  p.d = d;
  p.r = r;
  p.gamma = gamma;
  return p;
}

const KernelEvaluator& kernel_24() {
  static KernelEvaluator kernel(params_for(2, 4.0, 0.5));
  return kernel;
}

const KernelConstants& consts_24() {
  static KernelConstants consts = compute_kernel_constants(kernel_24(), 0.5);
  return consts;
}

SearchConfig base_config(int n, int m, int restarts, std::uint64_t seed) {
  SearchConfig config;
  config.n = n;
  config.m = m;
  config.restarts = restarts;
  config.seed = seed;
  config.threads = 2;
  return config;
}

}  // namespace

TEST_CASE("a single restart is exactly one uniform draw") {
  const auto schedule = WeightSchedule::uniform(2, 0.5);
  const auto config = base_config(16, 2, 1, 42);
  const auto result = best_of_random(config, schedule, kernel_24(), consts_24());
  CHECK(result.best_restart == 0);
  const auto direct = uniform_point_set(2, 2, 16, substream_seed(42, 0));
  CHECK(result.report.e_nm_sq ==
        doctest::Approx(enm_sq(direct, schedule, kernel_24())).epsilon(1e-15));
  for (int i = 0; i < 16; ++i) {
    CHECK(result.set.points[static_cast<std::size_t>(i)].components[0].coords ==
          direct.points[static_cast<std::size_t>(i)].components[0].coords);
  }
}

TEST_CASE("search is deterministic and thread-count independent") {
  const auto schedule = WeightSchedule::uniform(2, 0.5);
  auto config = base_config(16, 2, 16, 7);
  const auto a = best_of_random(config, schedule, kernel_24(), consts_24());
  config.threads = 1;
  const auto b = best_of_random(config, schedule, kernel_24(), consts_24());
  CHECK(a.best_restart == b.best_restart);
  CHECK(a.report.e_nm_sq == b.report.e_nm_sq);
}

TEST_CASE("more restarts never hurt, and bounds sandwich the result") {
  const auto schedule = WeightSchedule::uniform(2, 0.5);
  const auto r32 = best_of_random(base_config(32, 2, 32, 11), schedule, kernel_24(), consts_24());
  const auto r64 = best_of_random(base_config(32, 2, 64, 11), schedule, kernel_24(), consts_24());
  CHECK(r64.report.e_nm_sq <= r32.report.e_nm_sq);

  // The best of 64 should land under the uniform mean, and must respect the
  // analytic floor and the existence ceiling.
  CHECK(r64.report.e_nm_sq <= expected_enm_sq(32, schedule, consts_24().s_dr));
  CHECK(r64.report.e_nm_sq <= existence_upper_bound(32, schedule, consts_24().c_dr) + 1e-6);
  CHECK(r64.report.e_nm_sq >= universal_lower_bound(32, schedule, consts_24()) - 1e-6);
  for (const auto& p : r64.set.points) p.validate(2, 2);
}

TEST_CASE("exchange descent: identity at zero iterations, monotone otherwise") {
  const auto schedule = WeightSchedule::uniform(2, 0.5);
  const auto start = uniform_point_set(2, 2, 12, 123);
  const double start_e2 = enm_sq(start, schedule, kernel_24());

  auto config = base_config(12, 2, 1, 5);
  config.exchange_iters = 0;
  const auto unchanged = exchange_descent(start, config, schedule, kernel_24(), consts_24());
  CHECK(unchanged.accepted_exchanges == 0);
  CHECK(unchanged.report.e_nm_sq == doctest::Approx(start_e2).epsilon(1e-15));
  for (int i = 0; i < 12; ++i) {
    CHECK(unchanged.set.points[static_cast<std::size_t>(i)].components[1].coords ==
          start.points[static_cast<std::size_t>(i)].components[1].coords);
  }

  config.exchange_iters = 200;
  const auto improved = exchange_descent(start, config, schedule, kernel_24(), consts_24());
  CHECK(improved.report.e_nm_sq <= start_e2);
  CHECK(improved.report.e_nm_sq >= universal_lower_bound(12, schedule, consts_24()) - 1e-6);
}

TEST_CASE("incremental updates stay glued to full recomputation") {
  const auto schedule = WeightSchedule::uniform(1, 0.5);
  // A degenerate start (every node identical) keeps the acceptance rate high.
  ProductPointSet start;
  start.d = 2;
  start.m = 1;
  UniformRng rng(9);
  const auto node = uniform_product_point(2, 1, rng);
  for (int i = 0; i < 64; ++i) start.points.push_back(node);

  auto config = base_config(64, 1, 1, 77);
  config.exchange_iters = 4000;
  const auto result = exchange_descent(start, config, schedule, kernel_24(), consts_24());
  CHECK(result.accepted_exchanges >= 100);
  CHECK(std::abs(result.e_sq_incremental - result.report.e_nm_sq) <= 1e-10);
}

TEST_CASE("rate study reports points and slope") {
  const auto schedule = WeightSchedule::uniform(2, 0.5);
  auto config = base_config(0, 2, 8, 3);
  const auto study = rate_study({8, 16, 32, 64}, config, schedule, kernel_24(), consts_24());
  REQUIRE(study.points.size() == 4);
  for (const auto& p : study.points) {
    CHECK(p.e == doctest::Approx(std::sqrt(p.e_sq)));
    CHECK(p.e <= p.upper + 1e-6);
  }
  // Loose sanity band around the expected square-root decay.
  CHECK(study.slope < -0.2);
  CHECK(study.slope > -0.9);

  CHECK_THROWS_AS(rate_study({8, 8}, config, schedule, kernel_24(), consts_24()),
                  std::invalid_argument);
}

TEST_CASE("config validation") {
  const auto schedule = WeightSchedule::uniform(1, 0.5);
  auto config = base_config(0, 1, 1, 0);
  CHECK_THROWS_AS(best_of_random(config, schedule, kernel_24(), consts_24()),
                  std::invalid_argument);
  config.n = 4;
  config.restarts = 0;
  CHECK_THROWS_AS(best_of_random(config, schedule, kernel_24(), consts_24()),
                  std::invalid_argument);
}
