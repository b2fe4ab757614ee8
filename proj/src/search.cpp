#include "sqmc/search.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "sqmc/compensated.hpp"
#include "sqmc/rng.hpp"
#include "sqmc/simd/simd.hpp"

namespace sqmc {

namespace {

int worker_count(const SearchConfig& config) {
  if (config.threads > 0) return config.threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void validate_config(const SearchConfig& config) {
  if (config.n < 1) throw std::invalid_argument("SearchConfig: n must be positive");
  if (config.m < 1) throw std::invalid_argument("SearchConfig: m must be positive");
  if (config.restarts < 1) throw std::invalid_argument("SearchConfig: restarts must be >= 1");
  if (config.exchange_iters < 0) {
    throw std::invalid_argument("SearchConfig: exchange_iters must be >= 0");
  }
}

}  // namespace

SearchResult best_of_random(const SearchConfig& config, const WeightSchedule& schedule,
                            const KernelEvaluator& kernel, const KernelConstants& consts) {
  validate_config(config);
  schedule.validate();
  if (schedule.m != config.m) throw std::invalid_argument("best_of_random: schedule arity mismatch");
  const int d = kernel.params().d;

  struct Best {
    double e_sq = 0.0;
    int index = -1;
  };

  // Restart r always draws from substream (seed, r): results are identical
  // for any thread count, and a larger restart budget extends the same
  // stream family instead of reshuffling it.
  auto run_restart = [&](int index) {
    const auto set =
        uniform_point_set(d, config.m, config.n, substream_seed(config.seed, static_cast<std::uint64_t>(index)));
    return enm_sq(set, schedule, kernel);
  };

  const int workers = std::min(worker_count(config), config.restarts);
  std::vector<Best> local(static_cast<std::size_t>(workers));
  auto work = [&](int w) {
    Best best;
    for (int idx = w; idx < config.restarts; idx += workers) {
      const double e = run_restart(idx);
      if (best.index < 0 || e < best.e_sq) best = {e, idx};
    }
    local[static_cast<std::size_t>(w)] = best;
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }

  Best best;
  for (const auto& cand : local) {
    if (cand.index < 0) continue;
    // Ties break toward the lowest restart index.
    if (best.index < 0 || cand.e_sq < best.e_sq ||
        (cand.e_sq == best.e_sq && cand.index < best.index)) {
      best = cand;
    }
  }

  SearchResult result;
  result.best_restart = best.index;
  result.set = uniform_point_set(d, config.m, config.n,
                                 substream_seed(config.seed, static_cast<std::uint64_t>(best.index)));
  result.report = make_error_report(result.set, schedule, kernel, consts);
  result.e_sq_incremental = result.report.e_nm_sq;
  return result;
}

SearchResult exchange_descent(const ProductPointSet& start, const SearchConfig& config,
                              const WeightSchedule& schedule, const KernelEvaluator& kernel,
                              const KernelConstants& consts) {
  validate_config(config);
  schedule.validate();
  start.validate();
  if (start.m != schedule.m) throw std::invalid_argument("exchange_descent: arity mismatch");

  ProductPointSet current = start;
  const int n = current.n();
  PointSetFeatures features(current, kernel);
  const auto stride = static_cast<std::size_t>(features.stride());

  auto pair_product = [&](int i, int h) {
    double prod = 1.0;
    for (int j = 0; j < schedule.m; ++j) {
      prod *= 1.0 + schedule.gammas[static_cast<std::size_t>(j)] *
                        simd::dot(features.at(i, j), features.at(h, j), stride);
    }
    return prod;
  };
  auto row_products = [&](int i, std::vector<double>& out) {
    out.resize(static_cast<std::size_t>(n));
    for (int h = 0; h < n; ++h) out[static_cast<std::size_t>(h)] = pair_product(i, h);
  };

  // Full double sum once; proposals only touch one row afterwards.
  CompensatedSum total;
  for (int i = 0; i < n; ++i) {
    total.add(pair_product(i, i));
    for (int h = i + 1; h < n; ++h) total.add(2.0 * pair_product(i, h));
  }

  const double n_sq = static_cast<double>(n) * static_cast<double>(n);
  UniformRng rng(splitmix64(config.seed ^ 0x657863686e676560ULL));
  std::vector<double> old_row, new_row;
  std::vector<double> saved_features(static_cast<std::size_t>(schedule.m) * stride);
  int accepted = 0;

  for (int iter = 0; iter < config.exchange_iters; ++iter) {
    const int i0 = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
    const ProductPoint proposal = uniform_product_point(current.d, current.m, rng);

    row_products(i0, old_row);
    const double* base = features.at(i0, 0);
    std::copy(base, base + saved_features.size(), saved_features.begin());
    features.replace(i0, proposal, kernel);
    row_products(i0, new_row);

    CompensatedSum delta;
    for (int h = 0; h < n; ++h) {
      const double scale = h == i0 ? 1.0 : 2.0;
      delta.add(scale * (new_row[static_cast<std::size_t>(h)] - old_row[static_cast<std::size_t>(h)]));
    }
    if (delta.value() < 0.0) {
      total.add(delta.value());
      current.points[static_cast<std::size_t>(i0)] = proposal;
      ++accepted;
    } else {
      // Reject: restore the cached feature row.
      std::copy(saved_features.begin(), saved_features.end(), features.mutable_at(i0, 0));
    }
  }

  SearchResult result;
  result.set = std::move(current);
  result.accepted_exchanges = accepted;
  result.report = make_error_report(result.set, schedule, kernel, consts);
  result.e_sq_incremental = -1.0 + total.value() / n_sq;
  return result;
}

RateStudy rate_study(const std::vector<int>& n_values, const SearchConfig& config,
                     const WeightSchedule& schedule, const KernelEvaluator& kernel,
                     const KernelConstants& consts) {
  for (std::size_t i = 1; i < n_values.size(); ++i) {
    if (n_values[i] <= n_values[i - 1]) {
      throw std::invalid_argument("rate_study: n values must be increasing");
    }
  }
  RateStudy study;
  study.points.reserve(n_values.size());
  for (int n : n_values) {
    SearchConfig per_n = config;
    per_n.n = n;
    const SearchResult best = best_of_random(per_n, schedule, kernel, consts);
    RatePoint point;
    point.n = n;
    point.e_sq = best.report.e_nm_sq;
    point.e = best.report.e_nm;
    point.upper = std::sqrt(std::max(0.0, best.report.upper_bound));
    study.points.push_back(point);
  }

  // Least-squares slope of log e against log n.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (const auto& p : study.points) {
    if (p.e <= 0.0) continue;
    const double x = std::log(static_cast<double>(p.n));
    const double y = std::log(p.e);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count >= 2) {
    study.slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  }
  return study;
}

}  // namespace sqmc
