#pragma once

#include <cstdint>
#include <span>

namespace causalid::kernels {

struct Table {
  double (*sum)(std::span<const double>);
  double (*masked_sum)(std::span<const double>, std::span<const std::uint64_t>, std::uint64_t,
                       std::uint64_t);
  void (*multiply)(std::span<double>, std::span<const double>);
  void (*axpy)(double, std::span<const double>, std::span<double>);
};

namespace scalar {
extern const Table table;
}

#if defined(CAUSALID_HAVE_AVX2)
namespace avx2 {
extern const Table table;
}
#endif

#if defined(CAUSALID_HAVE_NEON)
namespace neon {
extern const Table table;
}
#endif

}  // namespace causalid::kernels
