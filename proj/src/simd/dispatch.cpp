#include <cstdlib>
#include <string>

#include "nodetok/simd/kernels.hpp"

namespace nodetok::simd {
namespace {

bool cpu_has_avx2() {
#if defined(NODETOK_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Kernels& select() {
  const char* forced = std::getenv("NODETOK_SIMD");
  if (forced != nullptr && std::string(forced) == "scalar") return scalar_kernels();
  if (const Kernels* k = avx2_kernels()) return *k;
  return scalar_kernels();
}

}  // namespace

const Kernels& scalar_kernels() { return detail::kScalarKernels; }

const Kernels* avx2_kernels() {
#if defined(NODETOK_HAVE_AVX2)
  static const bool ok = cpu_has_avx2();
  return ok ? &detail::kAvx2Kernels : nullptr;
#else
  return nullptr;
#endif
}

std::vector<Isa> available_isas() {
  std::vector<Isa> out{Isa::kScalar};
  if (avx2_kernels() != nullptr) out.push_back(Isa::kAvx2);
  return out;
}

const Kernels& kernels_for(Isa isa) {
  if (isa == Isa::kAvx2) {
    if (const Kernels* k = avx2_kernels()) return *k;
  }
  return scalar_kernels();
}

const Kernels& active() {
  static const Kernels& chosen = select();
  return chosen;
}

std::string_view isa_name(Isa isa) { return isa == Isa::kAvx2 ? "avx2" : "scalar"; }

}  // namespace nodetok::simd
