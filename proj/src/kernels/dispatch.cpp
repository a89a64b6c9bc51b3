#include <cstdlib>
#include <string_view>

#include "cwm/kernels.hpp"

namespace cwm::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(CWM_WITH_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& choose() {
  const char* env = std::getenv("CWM_SIMD");
  std::string_view mode = env != nullptr ? env : "auto";
  if (mode == "scalar") return scalar_table();
  if (const KernelTable* t = avx2_table()) return *t;
  return scalar_table();
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{"scalar", &scalar::mahalanobis_batch, &scalar::weighted_dot,
                                 &scalar::weighted_sum};
  return table;
}

const KernelTable* avx2_table() {
#if defined(CWM_WITH_AVX2)
  static const KernelTable table{"avx2", &avx2::mahalanobis_batch, &avx2::weighted_dot,
                                 &avx2::weighted_sum};
  static const bool supported = cpu_has_avx2();
  return supported ? &table : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() {
  static const KernelTable& table = choose();
  return table;
}

}  // namespace cwm::kernels
