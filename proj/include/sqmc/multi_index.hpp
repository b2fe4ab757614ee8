#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

namespace sqmc {

/// Exponent vector of a monomial in d variables.
///
/// Ordering is graded lexicographic: lower total degree first, ties broken
/// lexicographically on the exponent vector. Every polynomial container and
/// basis table in the library iterates in this order, which makes
/// Gram-Schmidt and all summations reproducible.
struct MultiIndex {
  std::vector<std::uint32_t> e;

  MultiIndex() = default;
  explicit MultiIndex(std::vector<std::uint32_t> exps) : e(std::move(exps)) {}

  static MultiIndex zeros(int d) {
    return MultiIndex(std::vector<std::uint32_t>(static_cast<std::size_t>(d), 0));
  }

  int dim() const { return static_cast<int>(e.size()); }
  std::uint32_t degree() const { return std::accumulate(e.begin(), e.end(), 0u); }

  std::uint32_t operator[](int i) const { return e[static_cast<std::size_t>(i)]; }

  bool operator==(const MultiIndex&) const = default;
};

bool graded_lex_less(const MultiIndex& a, const MultiIndex& b);

inline bool operator<(const MultiIndex& a, const MultiIndex& b) {
  return graded_lex_less(a, b);
}

/// All multi-indices in d variables with total degree exactly `degree`,
/// in graded-lex order. Count is binomial(degree + d - 1, degree).
std::vector<MultiIndex> multi_indices_of_degree(int d, int degree);

}  // namespace sqmc
