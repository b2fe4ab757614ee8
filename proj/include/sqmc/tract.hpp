#pragma once

#include <string>
#include <vector>

#include "sqmc/kernel.hpp"

namespace sqmc {

/// Families of per-coordinate weights gamma_{m,j}. The built-in kinds are
/// functions of j alone; a custom table covers m-dependent schedules up to
/// its length.
struct WeightFamily {
  enum class Kind { PowerLaw, Constant, LogDecay, Custom };

  Kind kind = Kind::Constant;
  double c = 1.0;  // scale, > 0
  double a = 0.0;  // power-law exponent, >= 0
  std::vector<double> table;  // Custom: gamma_j = table[j-1]

  static WeightFamily power_law(double c, double a);
  static WeightFamily constant(double c);
  static WeightFamily log_decay(double c);
  static WeightFamily custom(std::vector<double> table);

  /// Throws std::invalid_argument unless the family produces positive,
  /// uniformly bounded weights.
  void validate() const;

  double gamma(int j) const;  // j is 1-based
  WeightSchedule schedule(int m) const;
  double partial_sum(int m) const;
  std::string name() const;
};

/// Three-way classification of the integration problem for a weight
/// family. The conditions are nested: a bounded weight sum implies the
/// log-ratio is bounded, which implies the per-coordinate average
/// vanishes.
struct TractabilityVerdict {
  bool strong_polynomial = false;
  bool polynomial = false;
  bool weak = false;
  double beta = 0.0;         // limsup sum / log(m+1); +inf when unbounded
  double limit_sum = 0.0;    // limsup of the weight sums; +inf when unbounded
  double limit_ratio_m = 0.0;  // limit of sum/m
  bool empirical = false;    // verdict extrapolated from a finite table
};

/// Closed-form classification for the built-in families; finite-m
/// extrapolation (flagged empirical) for custom tables.
TractabilityVerdict classify(const WeightFamily& family, int empirical_m_cap = 4096);

struct BoundCurveRow {
  int m = 0;
  double sum_gamma = 0.0;
  double n_upper = 0.0;        // sufficient node count at eps
  double n_lower = 0.0;        // necessary node count at eps
  double upper_times_eps_sq = 0.0;  // eps-independent part of the upper bound
  double m_exponent_estimate = 0.0;  // c_dr * sum_gamma / log(m+1)
};

struct BoundCurve {
  double eps = 0.0;
  TractabilityVerdict verdict;
  std::vector<BoundCurveRow> rows;
};

/// Evaluates both node-count bounds over a list of m values, for log-log
/// plotting of the growth in m.
BoundCurve bound_curve(const WeightFamily& family, double eps, const std::vector<int>& m_values,
                       const KernelConstants& consts);

std::string bound_curve_to_csv(const BoundCurve& curve);
std::string verdict_to_json(const TractabilityVerdict& verdict);

}  // namespace sqmc
