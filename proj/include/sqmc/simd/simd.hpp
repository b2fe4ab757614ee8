#pragma once

#include <cstddef>

namespace sqmc::simd {

enum class Impl { Auto, Scalar, Avx2 };

/// Implementation selected for subsequent calls. Resolved once from the
/// SQMC_SIMD environment variable (scalar|avx2|auto) and CPU support.
Impl active_impl();

/// Force a specific implementation (tests; Impl::Auto re-resolves).
/// Requesting Avx2 on a CPU without it falls back to Scalar.
void force_impl(Impl impl);

const char* impl_name(Impl impl);

/// Dot product of two length-n arrays.
double dot(const double* a, const double* b, std::size_t n);

/// Sum of a length-n array.
double sum(const double* a, std::size_t n);

namespace detail {

// Reference kernels plus the vector variants, exposed for equivalence tests.
double dot_scalar(const double* a, const double* b, std::size_t n);
double sum_scalar(const double* a, std::size_t n);
bool avx2_supported();
double dot_avx2(const double* a, const double* b, std::size_t n);
double sum_avx2(const double* a, std::size_t n);

}  // namespace detail

}  // namespace sqmc::simd
