#pragma once

#include <memory>
#include <string>
#include <vector>

#include "sqmc/basis_eval.hpp"
#include "sqmc/simplex.hpp"

namespace sqmc {

/// Truncation of the spectral series. The analytic tail bound
/// sum_{l>L} b_l / [l(l+d)]^r (b_l the exact degree bound) decides the
/// truncation degree: the smallest L meeting tail_tolerance, capped by
/// max_degree. When the cap binds, the achievable bound is larger than
/// requested; effective_tail_bound() reports what actually holds.
struct TruncationPolicy {
  double tail_tolerance = 1e-12;
  int max_degree = 0;  // 0 = default_degree_cap(d)
};

/// Basis construction cost grows quickly with dimension; these caps keep
/// exact Gram-Schmidt affordable.
int default_degree_cap(int d);

/// Parameters of the single-factor weighted Sobolev space and its kernel.
/// The smoothness must satisfy r > d + 1 or the series diverge; violating
/// it throws std::domain_error from validate().
struct KernelParams {
  int d = 2;
  double r = 4.0;
  double gamma = 1.0;
  TruncationPolicy truncation;

  void validate() const;
};

/// Per-coordinate weights of the m-fold tensor space.
struct WeightSchedule {
  int m = 1;
  std::vector<double> gammas;

  static WeightSchedule uniform(int m, double gamma);

  double gamma_star() const;  // max entry
  double sum() const;
  void validate() const;  // positive entries, size m
  std::string digest() const;  // short hex fingerprint for reports
};

/// Upper bound on sum_{l > degree} b_l / [l(l+d)]^r, from
/// b_l <= M_d l^{2d} with M_d = (d+2)(2d+1)/2^{d+1} and integral
/// comparison. Finite for r > d + 1/2.
double analytic_series_tail(int d, double r, int degree);

/// Smallest truncation degree meeting the policy, capped.
int resolve_truncation_degree(int d, double r, const TruncationPolicy& policy);

/// Weight-free kernel tail g and the weighted kernels built from it.
/// Series are truncated at the policy degree; every evaluation is within
/// effective_tail_bound() of the infinite sum.
class KernelEvaluator {
 public:
  /// Builds (or reuses via shared_basis) the basis at the resolved degree.
  explicit KernelEvaluator(const KernelParams& params);
  KernelEvaluator(const KernelParams& params, std::shared_ptr<const OrthonormalBasis> basis);

  const KernelParams& params() const { return params_; }
  const BasisEvaluator& basis_eval() const { return eval_; }
  int truncation_degree() const { return trunc_degree_; }
  double effective_tail_bound() const { return tail_bound_; }

  /// Length of the feature map (basis functions of degree 1..L).
  int feature_size() const { return feature_size_; }

  /// psi(x): basis values of degree >= 1 scaled by sqrt of the spectral
  /// weight, so g(x, y) is exactly the dot product of two feature vectors.
  void features(const SimplexPoint& x, std::vector<double>& out) const;
  std::vector<double> features(const SimplexPoint& x) const;

  double g_from_features(const std::vector<double>& fx, const std::vector<double>& fy) const;

  /// g(x,y) = sum_{l>=1} P_l(x,y) / [l(l+d)]^r, truncated.
  double g(const SimplexPoint& x, const SimplexPoint& y) const;
  /// Diagonal g(x,x); nonnegative by construction (a sum of squares).
  double g_tilde(const SimplexPoint& x) const;

  /// Single-factor kernel 1 + gamma g(x,y).
  double k1(const SimplexPoint& x, const SimplexPoint& y) const;

  /// Product kernel over m factors, weights from the schedule (the gamma
  /// stored in params() is not used here).
  double km(const ProductPoint& X, const ProductPoint& Y, const WeightSchedule& schedule) const;

 private:
  KernelParams params_;
  std::shared_ptr<const OrthonormalBasis> basis_;
  BasisEvaluator eval_;
  int trunc_degree_ = 0;
  double tail_bound_ = 0.0;
  int feature_size_ = 0;
  std::vector<double> sqrt_weight_;  // per degree 1..L, replicated at eval
};

/// Majorant series constant: sum_{l>=1} b_l / [l(l+d)]^r with the exact
/// per-degree bound b_l, summed until the analytic tail is <= tol.
/// Requires r > d + 1.
double c_series(int d, double r, double tol = 1e-12);

/// Trace series: sum_{l>=1} dim(V_l) / [l(l+d)]^r. Equals the mean of
/// g_tilde under the normalized measure; never exceeds c_series.
double s_series(int d, double r, double tol = 1e-12);

struct GridSearchConfig {
  double pitch = 1.0 / 32.0;   // grid spacing per axis
  double refine_step_min = 1e-10;
  int refine_starts = 4;       // best cells kept for local refinement
};

struct GExtrema {
  double min_value = 0.0;
  double max_value = 0.0;
  SimplexPoint argmin_x, argmin_y;
  SimplexPoint argmax_x, argmax_y;
};

/// Sampled extrema of g over simplex pairs: deterministic coarse grid plus
/// pattern-search refinement. min_value is an upper bound for the true
/// minimum (it is attained by a concrete pair), max_value a lower bound
/// for the true maximum.
GExtrema estimate_g_extrema(const KernelEvaluator& kernel, const GridSearchConfig& config = {});

/// Sampled minimum of the diagonal g_tilde over the simplex.
double estimate_gtilde_min(const KernelEvaluator& kernel, const GridSearchConfig& config = {});

/// Weight shrink factor min(1, 1/(gamma_star |g_min|)); 1 when g_min >= 0.
/// Shrinking every weight by it makes the product kernel pointwise
/// nonnegative. Throws std::invalid_argument for gamma_star <= 0.
double b_factor(double gamma_star, double g_min_estimate);

/// All series constants and extrema estimates a bound evaluation needs,
/// with enough provenance to reproduce them.
struct KernelConstants {
  int d = 0;
  double r = 0.0;
  double gamma_star = 0.0;
  double c_dr = 0.0;
  double s_dr = 0.0;
  double g_min_estimate = 0.0;
  double g_max_estimate = 0.0;
  double gtilde_min_estimate = 0.0;
  double b_dr = 0.0;
  double M_dr = 0.0;      // b_dr * gtilde_min * gamma_star
  double alpha_dr = 0.0;  // log(1 + M)/M, 1 in the M -> 0 limit
  // provenance
  int truncation_degree = 0;
  double tail_tolerance_requested = 0.0;
  double tail_bound_effective = 0.0;
  double series_tol = 0.0;
  double grid_pitch = 0.0;
};

KernelConstants compute_kernel_constants(const KernelEvaluator& kernel, double gamma_star,
                                         const GridSearchConfig& config = {},
                                         double series_tol = 1e-12);

std::string kernel_constants_to_json(const KernelConstants& consts);

}  // namespace sqmc
