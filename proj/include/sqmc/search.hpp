#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "sqmc/wce.hpp"

namespace sqmc {

/// Configuration for empirical low-error point-set search.
struct SearchConfig {
  int n = 16;
  int m = 1;
  int restarts = 1;        // independent uniform draws, best kept
  int exchange_iters = 0;  // single-node replacement proposals after that
  std::uint64_t seed = 0;
  int threads = 0;  // 0 = hardware concurrency; restarts split across threads
};

struct SearchResult {
  ProductPointSet set;
  ErrorReport report;  // e_nm_sq recomputed from scratch on the final set
  int best_restart = 0;
  int accepted_exchanges = 0;
  /// Value carried by the incremental row updates during exchange descent;
  /// its drift from report.e_nm_sq measures accumulated update error.
  double e_sq_incremental = 0.0;
};

/// Best of `restarts` i.i.d. uniform point sets by squared worst-case
/// error, ties broken by the lowest restart index. Restart r draws from
/// substream (seed, r), so the result does not depend on the thread
/// schedule and extending the restart count can only improve the result.
SearchResult best_of_random(const SearchConfig& config, const WeightSchedule& schedule,
                            const KernelEvaluator& kernel, const KernelConstants& consts);

/// Greedy single-node exchange: propose redrawing one node uniformly,
/// accept when the squared error strictly decreases. The double sum is
/// updated incrementally (one row per proposal), not recomputed.
SearchResult exchange_descent(const ProductPointSet& start, const SearchConfig& config,
                              const WeightSchedule& schedule, const KernelEvaluator& kernel,
                              const KernelConstants& consts);

struct RatePoint {
  int n = 0;
  double e = 0.0;   // best worst-case error found
  double e_sq = 0.0;
  double upper = 0.0;  // sqrt of the existence bound
};

struct RateStudy {
  std::vector<RatePoint> points;
  double slope = 0.0;  // least-squares slope of log e versus log n
};

/// Best-of-restarts error per node count, with the log-log convergence
/// slope (about -1/2 for uniform-quality sets).
RateStudy rate_study(const std::vector<int>& n_values, const SearchConfig& config,
                     const WeightSchedule& schedule, const KernelEvaluator& kernel,
                     const KernelConstants& consts);

}  // namespace sqmc
