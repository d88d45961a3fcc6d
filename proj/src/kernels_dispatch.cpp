#include <cstdlib>
#include <string_view>

#include "prwf/kernels.hpp"

namespace prwf::kernels {

#if defined(PRWF_BUILD_AVX2)
const Table& avx2_table_unchecked() noexcept;  // kernels_avx2.cpp

const Table* avx2_table() noexcept {
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &avx2_table_unchecked() : nullptr;
}
#else
const Table* avx2_table() noexcept { return nullptr; }
#endif

const Table& active() noexcept {
  static const Table& chosen = []() -> const Table& {
    const char* env = std::getenv("PRWF_KERNELS");
    if (env != nullptr && std::string_view(env) == "scalar") return scalar_table();
    if (const Table* t = avx2_table()) return *t;
    return scalar_table();
  }();
  return chosen;
}

}  // namespace prwf::kernels
