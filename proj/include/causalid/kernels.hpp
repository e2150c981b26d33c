#pragma once

#include <cstdint>
#include <span>

// Dense table arithmetic used by the oracle. Every operation has a portable
// scalar reference; vector variants are picked at runtime when the CPU
// supports them. Setting CAUSALID_SIMD=scalar in the environment forces the
// reference path.
namespace causalid::kernels {

enum class Backend { scalar, avx2, neon };

const char* backend_name(Backend b);
// Backend selected for this process.
Backend active_backend();
// Whether b can run on this machine (scalar always can).
bool backend_available(Backend b);

// Pairwise summation.
double sum(std::span<const double> values);
// Sum of values[i] over the i where (keys[i] & mask) == pattern.
double masked_sum(std::span<const double> values, std::span<const std::uint64_t> keys,
                  std::uint64_t mask, std::uint64_t pattern);
// acc[i] *= factor[i]
void multiply(std::span<double> acc, std::span<const double> factor);
// y[i] += a * x[i]
void axpy(double a, std::span<const double> x, std::span<double> y);

// Same operations on an explicitly chosen backend. Throws std::invalid_argument
// if the backend is not available.
double sum(Backend b, std::span<const double> values);
double masked_sum(Backend b, std::span<const double> values,
                  std::span<const std::uint64_t> keys, std::uint64_t mask,
                  std::uint64_t pattern);
void multiply(Backend b, std::span<double> acc, std::span<const double> factor);
void axpy(Backend b, double a, std::span<const double> x, std::span<double> y);

}  // namespace causalid::kernels
