#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "sqmc/polynomial.hpp"
#include "sqmc/simplex.hpp"

namespace sqmc {

/// One orthonormal basis element, kept exact: the represented function is
/// poly / sqrt(norm_sq). The square root is folded in only when the
/// element is evaluated in floating point.
struct BasisFunction {
  MultiIndexPolynomial poly;  // primitive integer coefficients, sign-fixed
  Rational norm_sq;           // <poly, poly>, exact and positive
};

enum class WithinDegreeOrder { GradedLex, Reversed };

/// Orthonormal polynomial basis on the d-simplex, one block per total
/// degree. Block l has binomial(l + d - 1, l) elements; block 0 is the
/// constant 1. Immutable once built.
struct OrthonormalBasis {
  int d = 0;
  int max_degree = 0;
  std::vector<std::vector<BasisFunction>> by_degree;

  int size_of_degree(int l) const { return static_cast<int>(by_degree[static_cast<std::size_t>(l)].size()); }
  int total_size() const;
  const BasisFunction& at(int l, int k) const {  // k is 1-based like the tables
    return by_degree[static_cast<std::size_t>(l)][static_cast<std::size_t>(k - 1)];
  }
};

/// Expected block size binomial(l + d - 1, l).
Integer degree_space_dimension(int d, int l);

/// Derivative construction of the degree-|n| orthogonal polynomial:
/// the |n|-th mixed partial of x^n (1 - |x|)^{|n|}, expanded exactly.
MultiIndexPolynomial rodrigues_polynomial(const MultiIndex& n_tilde);

/// Builds the basis with exact Gram-Schmidt within each degree (the
/// derivative family is linearly independent but not orthogonal inside a
/// degree). Throws std::logic_error if an exactly zero polynomial shows up,
/// which would mean the construction itself is broken.
OrthonormalBasis build_basis(int d, int max_degree,
                             WithinDegreeOrder order = WithinDegreeOrder::GradedLex);

/// Process-wide memoized basis, keyed by (d, max_degree).
std::shared_ptr<const OrthonormalBasis> shared_basis(int d, int max_degree);

/// JSON serialization with exact numerator/denominator strings; used for
/// the on-disk cache so expensive construction is reused across runs.
std::string basis_to_json(const OrthonormalBasis& basis);
OrthonormalBasis basis_from_json(const std::string& text);
void save_basis(const OrthonormalBasis& basis, const std::string& path);
OrthonormalBasis load_basis(const std::string& path);

/// FNV-1a over the canonical coefficient payload; stored inside cache
/// files and re-checked on load.
std::uint64_t basis_content_hash(const OrthonormalBasis& basis);

}  // namespace sqmc
