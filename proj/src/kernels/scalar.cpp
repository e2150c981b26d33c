#include "kernels_impl.hpp"

#include <cstddef>

namespace causalid::kernels::scalar {

namespace {

constexpr std::size_t kBlock = 8;

double sum(std::span<const double> v) {
  if (v.size() <= kBlock) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  std::size_t half = v.size() / 2;
  return sum(v.first(half)) + sum(v.subspan(half));
}

double masked_sum(std::span<const double> values, std::span<const std::uint64_t> keys,
                  std::uint64_t mask, std::uint64_t pattern) {
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if ((keys[i] & mask) == pattern) s += values[i];
  }
  return s;
}

void multiply(std::span<double> acc, std::span<const double> factor) {
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] *= factor[i];
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

}  // namespace

const Table table{sum, masked_sum, multiply, axpy};

}  // namespace causalid::kernels::scalar
