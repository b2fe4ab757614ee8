#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sqmc/kernel.hpp"

namespace sqmc {

/// The nodes of a QMC rule on the m-fold product of simplices.
struct ProductPointSet {
  int d = 0;
  int m = 0;
  std::vector<ProductPoint> points;

  int n() const { return static_cast<int>(points.size()); }
  void validate() const;
};

ProductPointSet uniform_point_set(int d, int m, int n, std::uint64_t seed);

/// CSV: header row, then one row per node with m*d coordinates (columns
/// x{j}_{i} for factor j, coordinate i). JSON carries d, m, n explicitly.
std::string point_set_to_csv(const ProductPointSet& set);
ProductPointSet point_set_from_csv(const std::string& text, int d, int m);
std::string point_set_to_json(const ProductPointSet& set);
ProductPointSet point_set_from_json(const std::string& text);

/// Cached feature vectors for every (node, factor) pair of a point set;
/// the quadratic-form evaluation of the worst-case error runs on these.
class PointSetFeatures {
 public:
  PointSetFeatures(const ProductPointSet& set, const KernelEvaluator& kernel);

  int n() const { return n_; }
  int m() const { return m_; }
  const double* at(int i, int j) const {  // node i, factor j
    return data_.data() + (static_cast<std::size_t>(i) * m_ + j) * stride_;
  }
  double* mutable_at(int i, int j) {
    return data_.data() + (static_cast<std::size_t>(i) * m_ + j) * stride_;
  }
  int stride() const { return stride_; }

  void replace(int i, const ProductPoint& p, const KernelEvaluator& kernel);

 private:
  int n_ = 0, m_ = 0, stride_ = 0;
  std::vector<double> data_;
};

/// Initial worst-case error: exactly 1 in this normalization.
double e0m();

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::int64_t samples = 0;
};

/// Monte Carlo diagnostic for the double integral of the product kernel,
/// whose exact value is 1.
McEstimate e0m_mc_diagnostic(const KernelEvaluator& kernel, const WeightSchedule& schedule,
                             std::int64_t samples, std::uint64_t seed);

/// Squared worst-case error of the rule with the given nodes:
/// -1 + (1/n^2) sum_{i,h} prod_j (1 + gamma_j g(t_{i,j}, t_{h,j})).
/// Pair terms are accumulated with compensated summation; the (i,h) and
/// (h,i) terms are equal and counted once.
double enm_sq(const ProductPointSet& set, const WeightSchedule& schedule,
              const KernelEvaluator& kernel);
double enm_sq(const PointSetFeatures& features, const WeightSchedule& schedule,
              const KernelEvaluator& kernel);

/// Exact mean of enm_sq over i.i.d. uniform nodes:
/// (1/n)(prod_j (1 + gamma_j s_dr) - 1).
double expected_enm_sq(int n, const WeightSchedule& schedule, double s_dr);

/// Averaging bound: some node set achieves
/// (1/n)(prod_j (1 + gamma_j c_dr) - 1).
double existence_upper_bound(int n, const WeightSchedule& schedule, double c_dr);

/// Floor valid for every node set:
/// -1 + (1/n) prod_j (1 + b_dr gtilde_min gamma_j). May be negative
/// (vacuous) and is returned as-is.
double universal_lower_bound(int n, const WeightSchedule& schedule, const KernelConstants& consts);

/// Node count sufficient to reach relative accuracy eps:
/// eps^-2 prod_j (1 + gamma_j c_dr). Requires eps in (0,1).
double neps_upper(double eps, const WeightSchedule& schedule, double c_dr);

/// Node count necessary for accuracy eps:
/// exp(alpha b gtilde_min sum_j gamma_j) / (1 + eps^2).
double neps_lower(double eps, const WeightSchedule& schedule, const KernelConstants& consts);

/// Function with finitely many tensor-basis coefficients. Indices store,
/// per factor, the degree l_j and the 1-based position k_j within the
/// degree block.
struct TensorFourierFunction {
  struct Term {
    std::vector<int> degrees;    // l_j, length m
    std::vector<int> positions;  // k_j, length m
    double coeff = 0.0;
  };
  int d = 0;
  int m = 0;
  std::vector<Term> terms;

  void validate(const BasisEvaluator& eval) const;
};

/// Squared norm in the weighted tensor space: each coefficient weighted by
/// the product of per-factor spectral weights (1 at degree 0, otherwise
/// [l(l+d)]^r / gamma_j).
double hm_norm_sq(const TensorFourierFunction& f, const WeightSchedule& schedule, double r);

/// Exact normalized integral: the coefficient at the all-zero degree index.
double integrate_exact(const TensorFourierFunction& f);

/// Equal-weight node average of the synthesized function.
double qmc_apply(const TensorFourierFunction& f, const ProductPointSet& set,
                 const BasisEvaluator& eval);

double tensor_fourier_eval(const TensorFourierFunction& f, const ProductPoint& X,
                           const BasisEvaluator& eval);

struct ErrorReport {
  double e_nm_sq = 0.0;
  double e_nm = 0.0;  // sqrt(max(e_nm_sq, 0)); negatives are truncation dust
  double e_0m = 1.0;
  double upper_bound = 0.0;   // existence bound at this n
  double lower_bound = 0.0;   // universal floor at this n
  double expected = 0.0;      // mean over uniform draws
  int n = 0, m = 0, d = 0;
  double r = 0.0;
  std::string schedule_digest;

  bool clamped = false;  // e_nm_sq was negative before clamping
};

ErrorReport make_error_report(const ProductPointSet& set, const WeightSchedule& schedule,
                              const KernelEvaluator& kernel, const KernelConstants& consts);

std::string error_report_to_json(const ErrorReport& report);
/// CSV columns: d,r,m,n,seed,e2,upper,lower,expected
std::string error_report_csv_header();
std::string error_report_csv_row(const ErrorReport& report, std::uint64_t seed);

}  // namespace sqmc
