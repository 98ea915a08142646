#include <cstdlib>
#include <string_view>

#include "hblab/simd/kernels.hpp"

namespace hblab::simd {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable kScalar{Isa::scalar, detail::dot_scalar, detail::abs_dot_scalar,
                          detail::cdot_scalar, detail::cdot_conj_scalar};
const KernelTable kAvx2{Isa::avx2, detail::dot_avx2, detail::abs_dot_avx2,
                        detail::cdot_avx2, detail::cdot_conj_avx2};

const KernelTable& select() {
  if (const char* forced = std::getenv("HBLAB_ISA")) {
    if (std::string_view(forced) == "scalar") return kScalar;
  }
  if (const KernelTable* t = avx2_kernels()) return *t;
  return kScalar;
}

}  // namespace

const KernelTable& scalar_kernels() { return kScalar; }

const KernelTable* avx2_kernels() {
  static const bool ok = detail::avx2_compiled() && cpu_has_avx2();
  return ok ? &kAvx2 : nullptr;
}

const KernelTable& active_kernels() {
  static const KernelTable& table = select();
  return table;
}

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

}  // namespace hblab::simd
