#include "kernels_impl.hpp"

#include <arm_neon.h>

#include <cstddef>

namespace causalid::kernels::neon {

namespace {

double sum(std::span<const double> v) {
  const std::size_t n = v.size();
  float64x2_t a0 = vdupq_n_f64(0.0);
  float64x2_t a1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    a0 = vaddq_f64(a0, vld1q_f64(v.data() + i));
    a1 = vaddq_f64(a1, vld1q_f64(v.data() + i + 2));
  }
  double s = vaddvq_f64(vaddq_f64(a0, a1));
  for (; i < n; ++i) s += v[i];
  return s;
}

double masked_sum(std::span<const double> values, std::span<const std::uint64_t> keys,
                  std::uint64_t mask, std::uint64_t pattern) {
  const std::size_t n = values.size();
  const uint64x2_t m = vdupq_n_u64(mask);
  const uint64x2_t p = vdupq_n_u64(pattern);
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    uint64x2_t hit = vceqq_u64(vandq_u64(vld1q_u64(keys.data() + i), m), p);
    uint64x2_t bits = vandq_u64(vreinterpretq_u64_f64(vld1q_f64(values.data() + i)), hit);
    acc = vaddq_f64(acc, vreinterpretq_f64_u64(bits));
  }
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) {
    if ((keys[i] & mask) == pattern) s += values[i];
  }
  return s;
}

void multiply(std::span<double> acc, std::span<const double> factor) {
  const std::size_t n = acc.size();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(acc.data() + i, vmulq_f64(vld1q_f64(acc.data() + i), vld1q_f64(factor.data() + i)));
  }
  for (; i < n; ++i) acc[i] *= factor[i];
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  const std::size_t n = y.size();
  const float64x2_t av = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t prod = vmulq_f64(av, vld1q_f64(x.data() + i));
    vst1q_f64(y.data() + i, vaddq_f64(vld1q_f64(y.data() + i), prod));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

}  // namespace

const Table table{sum, masked_sum, multiply, axpy};

}  // namespace causalid::kernels::neon
