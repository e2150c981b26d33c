#include "kernels_impl.hpp"

#include <immintrin.h>

#include <cstddef>

namespace causalid::kernels::avx2 {

namespace {

double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

double sum(std::span<const double> v) {
  const std::size_t n = v.size();
  __m256d a0 = _mm256_setzero_pd();
  __m256d a1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    a0 = _mm256_add_pd(a0, _mm256_loadu_pd(v.data() + i));
    a1 = _mm256_add_pd(a1, _mm256_loadu_pd(v.data() + i + 4));
  }
  double s = hsum(_mm256_add_pd(a0, a1));
  for (; i < n; ++i) s += v[i];
  return s;
}

double masked_sum(std::span<const double> values, std::span<const std::uint64_t> keys,
                  std::uint64_t mask, std::uint64_t pattern) {
  const std::size_t n = values.size();
  const __m256i m = _mm256_set1_epi64x(static_cast<long long>(mask));
  const __m256i p = _mm256_set1_epi64x(static_cast<long long>(pattern));
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256i k = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(keys.data() + i));
    __m256i hit = _mm256_cmpeq_epi64(_mm256_and_si256(k, m), p);
    __m256d v = _mm256_loadu_pd(values.data() + i);
    acc = _mm256_add_pd(acc, _mm256_and_pd(v, _mm256_castsi256_pd(hit)));
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    if ((keys[i] & mask) == pattern) s += values[i];
  }
  return s;
}

void multiply(std::span<double> acc, std::span<const double> factor) {
  const std::size_t n = acc.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d a = _mm256_loadu_pd(acc.data() + i);
    __m256d f = _mm256_loadu_pd(factor.data() + i);
    _mm256_storeu_pd(acc.data() + i, _mm256_mul_pd(a, f));
  }
  for (; i < n; ++i) acc[i] *= factor[i];
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  const std::size_t n = y.size();
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d xv = _mm256_loadu_pd(x.data() + i);
    __m256d yv = _mm256_loadu_pd(y.data() + i);
    _mm256_storeu_pd(y.data() + i, _mm256_add_pd(yv, _mm256_mul_pd(av, xv)));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

}  // namespace

const Table table{sum, masked_sum, multiply, axpy};

}  // namespace causalid::kernels::avx2
