#pragma once

// Inner-loop kernels with a scalar reference and optional vector variants.
// The variant is chosen once per process from CPU features; NODETOK_SIMD
// (scalar|avx2) forces a choice. Integer kernels agree bit-for-bit across
// variants; floating kernels agree up to summation order.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "nodetok/graph.hpp"

namespace nodetok::simd {

enum class Isa { kScalar, kAvx2 };

struct Kernels {
  Isa isa;
  const char* name;
  /// min_k a[k] + b[k], skipping k where either side is kUnreachable.
  /// Returns kUnreachable when no k qualifies.
  Hops (*min_plus)(const Hops* a, const Hops* b, std::size_t k);
  /// min_k a[k], kUnreachable for k == 0.
  Hops (*min_u32)(const Hops* a, std::size_t k);
  double (*dot)(const double* a, const double* b, std::size_t n);
  /// sum_k (a[k] - b[k])^2
  double (*squared_distance)(const double* a, const double* b, std::size_t n);
  /// y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
};

const Kernels& scalar_kernels();
/// nullptr when the variant was not compiled in or the CPU lacks it.
const Kernels* avx2_kernels();

std::vector<Isa> available_isas();
const Kernels& kernels_for(Isa isa);
/// Process-wide selection.
const Kernels& active();

std::string_view isa_name(Isa isa);

inline Hops min_plus(std::span<const Hops> a, std::span<const Hops> b) {
  return active().min_plus(a.data(), b.data(), a.size());
}
inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}
inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  return active().squared_distance(a.data(), b.data(), a.size());
}
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), x.size());
}

namespace detail {
extern const Kernels kScalarKernels;
#if defined(NODETOK_HAVE_AVX2)
extern const Kernels kAvx2Kernels;
#endif
}  // namespace detail

}  // namespace nodetok::simd
