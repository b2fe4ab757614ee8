#pragma once

#include <cstdint>
#include <vector>

#include "sqmc/orthobasis.hpp"

namespace sqmc {

/// Flattened floating-point view of an orthonormal basis for fast repeated
/// evaluation. Coefficients carry the 1/sqrt(norm) factor; each is obtained
/// from the exact ratio coeff^2 / norm_sq so huge integer coefficients
/// cannot overflow on the way to double. Terms are stored and summed in
/// long double: monomial coefficients reach ~1e6 at degree 8 while values
/// stay O(1), and the extra mantissa keeps the cancellation error below
/// 1e-12 absolute.
class BasisEvaluator {
 public:
  explicit BasisEvaluator(std::shared_ptr<const OrthonormalBasis> basis);

  int dim() const { return d_; }
  int max_degree() const { return max_degree_; }
  const OrthonormalBasis& basis() const { return *basis_; }

  /// Number of basis functions with degree <= max_degree.
  int total_size() const { return total_size_; }
  /// Index of the first function of degree l in the flat value array.
  int degree_offset(int l) const { return offsets_[static_cast<std::size_t>(l)]; }
  int degree_size(int l) const { return sizes_[static_cast<std::size_t>(l)]; }

  /// Values of every basis function at x, flat in (degree, k) order.
  /// `out` is resized to total_size().
  void eval_all(const SimplexPoint& x, std::vector<double>& out) const;
  std::vector<double> eval_all(const SimplexPoint& x) const;

  /// Value of the single element P_{l,k} (k 1-based).
  double eval_one(int l, int k, const SimplexPoint& x) const;

 private:
  std::shared_ptr<const OrthonormalBasis> basis_;
  int d_ = 0;
  int max_degree_ = 0;
  int total_size_ = 0;
  std::vector<int> offsets_;
  std::vector<int> sizes_;
  // Flat term storage: polynomial i owns terms [poly_begin_[i], poly_begin_[i+1]).
  std::vector<std::size_t> poly_begin_;
  std::vector<long double> term_coeff_;
  std::vector<std::uint32_t> term_exps_;  // d exponents per term
  std::uint32_t max_exp_ = 0;
};

}  // namespace sqmc
