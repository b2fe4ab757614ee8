#include "sqmc/multi_index.hpp"

#include <algorithm>

namespace sqmc {

bool graded_lex_less(const MultiIndex& a, const MultiIndex& b) {
  const auto da = a.degree();
  const auto db = b.degree();
  if (da != db) return da < db;
  return std::lexicographical_compare(a.e.begin(), a.e.end(), b.e.begin(), b.e.end());
}

namespace {

void enumerate(int d, int remaining, std::vector<std::uint32_t>& acc,
               std::vector<MultiIndex>& out) {
  if (static_cast<int>(acc.size()) == d - 1) {
    acc.push_back(static_cast<std::uint32_t>(remaining));
    out.emplace_back(acc);
    acc.pop_back();
    return;
  }
  for (int v = 0; v <= remaining; ++v) {
    acc.push_back(static_cast<std::uint32_t>(v));
    enumerate(d, remaining - v, acc, out);
    acc.pop_back();
  }
}

}  // namespace

std::vector<MultiIndex> multi_indices_of_degree(int d, int degree) {
  std::vector<MultiIndex> out;
  std::vector<std::uint32_t> acc;
  acc.reserve(static_cast<std::size_t>(d));
  enumerate(d, degree, acc, out);
  std::sort(out.begin(), out.end(), graded_lex_less);
  return out;
}

}  // namespace sqmc
