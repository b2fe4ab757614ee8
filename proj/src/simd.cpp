#include "sqmc/simd/simd.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

#if defined(__x86_64__) || defined(_M_X64)
#define SQMC_X86_64 1
#include <immintrin.h>
#endif

namespace sqmc::simd {

namespace detail {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sum_scalar(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i];
  return acc;
}

#if SQMC_X86_64

bool avx2_supported() { return __builtin_cpu_supports("avx2"); }

namespace {

__attribute__((target("avx2"))) inline double hsum4(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(lo) + _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo));
}

}  // namespace

__attribute__((target("avx2"))) double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    acc1 = _mm256_add_pd(acc1,
                         _mm256_mul_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4)));
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  double result = hsum4(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) result += a[i] * b[i];
  return result;
}

__attribute__((target("avx2"))) double sum_avx2(const double* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i));
  double result = hsum4(acc);
  for (; i < n; ++i) result += a[i];
  return result;
}

#else

bool avx2_supported() { return false; }
double dot_avx2(const double* a, const double* b, std::size_t n) { return dot_scalar(a, b, n); }
double sum_avx2(const double* a, std::size_t n) { return sum_scalar(a, n); }

#endif

}  // namespace detail

namespace {

Impl resolve() {
  if (const char* env = std::getenv("SQMC_SIMD")) {
    if (std::strcmp(env, "scalar") == 0) return Impl::Scalar;
    if (std::strcmp(env, "avx2") == 0 && detail::avx2_supported()) return Impl::Avx2;
    // "auto" or anything else falls through to detection.
  }
  return detail::avx2_supported() ? Impl::Avx2 : Impl::Scalar;
}

std::atomic<Impl> g_impl{Impl::Auto};

Impl current() {
  Impl impl = g_impl.load(std::memory_order_relaxed);
  if (impl == Impl::Auto) {
    impl = resolve();
    g_impl.store(impl, std::memory_order_relaxed);
  }
  return impl;
}

}  // namespace

Impl active_impl() { return current(); }

void force_impl(Impl impl) {
  if (impl == Impl::Avx2 && !detail::avx2_supported()) impl = Impl::Scalar;
  g_impl.store(impl, std::memory_order_relaxed);
}

const char* impl_name(Impl impl) {
  switch (impl) {
    case Impl::Scalar: return "scalar";
    case Impl::Avx2: return "avx2";
    default: return "auto";
  }
}

double dot(const double* a, const double* b, std::size_t n) {
  return current() == Impl::Avx2 ? detail::dot_avx2(a, b, n) : detail::dot_scalar(a, b, n);
}

double sum(const double* a, std::size_t n) {
  return current() == Impl::Avx2 ? detail::sum_avx2(a, n) : detail::sum_scalar(a, n);
}

}  // namespace sqmc::simd
