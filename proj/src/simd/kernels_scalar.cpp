#include <algorithm>

#include "nodetok/simd/kernels.hpp"

namespace nodetok::simd {
namespace {

Hops min_plus_scalar(const Hops* a, const Hops* b, std::size_t k) {
  Hops best = kUnreachable;
  for (std::size_t i = 0; i < k; ++i) {
    if (a[i] == kUnreachable || b[i] == kUnreachable) continue;
    best = std::min(best, a[i] + b[i]);
  }
  return best;
}

Hops min_u32_scalar(const Hops* a, std::size_t k) {
  Hops best = kUnreachable;
  for (std::size_t i = 0; i < k; ++i) best = std::min(best, a[i]);
  return best;
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double squared_distance_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace

namespace detail {
const Kernels kScalarKernels{Isa::kScalar,   "scalar",          &min_plus_scalar, &min_u32_scalar,
                             &dot_scalar,    &squared_distance_scalar, &axpy_scalar};
}

}  // namespace nodetok::simd
