#include <cstdlib>
#include <stdexcept>
#include <string>

#include "causalid/kernels.hpp"
#include "kernels_impl.hpp"

namespace causalid::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(CAUSALID_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const Table* table_for(Backend b) {
  switch (b) {
    case Backend::scalar:
      return &scalar::table;
    case Backend::avx2:
#if defined(CAUSALID_HAVE_AVX2)
      if (cpu_has_avx2()) return &avx2::table;
#endif
      return nullptr;
    case Backend::neon:
#if defined(CAUSALID_HAVE_NEON)
      return &neon::table;
#else
      return nullptr;
#endif
  }
  return nullptr;
}

Backend choose() {
  const char* env = std::getenv("CAUSALID_SIMD");
  if (env && std::string(env) == "scalar") return Backend::scalar;
  if (table_for(Backend::avx2)) return Backend::avx2;
  if (table_for(Backend::neon)) return Backend::neon;
  return Backend::scalar;
}

const Table& active() {
  static const Table* t = table_for(choose());
  return *t;
}

const Table& require(Backend b) {
  const Table* t = table_for(b);
  if (!t) throw std::invalid_argument(std::string("kernel backend unavailable: ") + backend_name(b));
  return *t;
}

}  // namespace

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::scalar:
      return "scalar";
    case Backend::avx2:
      return "avx2";
    case Backend::neon:
      return "neon";
  }
  return "unknown";
}

Backend active_backend() {
  static const Backend b = choose();
  return b;
}

bool backend_available(Backend b) { return table_for(b) != nullptr; }

double sum(std::span<const double> values) { return active().sum(values); }

double masked_sum(std::span<const double> values, std::span<const std::uint64_t> keys,
                  std::uint64_t mask, std::uint64_t pattern) {
  return active().masked_sum(values, keys, mask, pattern);
}

void multiply(std::span<double> acc, std::span<const double> factor) {
  active().multiply(acc, factor);
}

void axpy(double a, std::span<const double> x, std::span<double> y) { active().axpy(a, x, y); }

double sum(Backend b, std::span<const double> values) { return require(b).sum(values); }

double masked_sum(Backend b, std::span<const double> values,
                  std::span<const std::uint64_t> keys, std::uint64_t mask,
                  std::uint64_t pattern) {
  return require(b).masked_sum(values, keys, mask, pattern);
}

void multiply(Backend b, std::span<double> acc, std::span<const double> factor) {
  require(b).multiply(acc, factor);
}

void axpy(Backend b, double a, std::span<const double> x, std::span<double> y) {
  require(b).axpy(a, x, y);
}

}  // namespace causalid::kernels
