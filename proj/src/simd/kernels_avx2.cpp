// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include <algorithm>

#include "nodetok/simd/kernels.hpp"

namespace nodetok::simd {
namespace {

inline Hops hmin_epu32(__m256i v) {
  __m128i m = _mm_min_epu32(_mm256_castsi256_si128(v), _mm256_extracti128_si256(v, 1));
  m = _mm_min_epu32(m, _mm_shuffle_epi32(m, _MM_SHUFFLE(1, 0, 3, 2)));
  m = _mm_min_epu32(m, _mm_shuffle_epi32(m, _MM_SHUFFLE(2, 3, 0, 1)));
  return static_cast<Hops>(_mm_cvtsi128_si32(m));
}

inline double hsum_pd(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

Hops min_plus_avx2(const Hops* a, const Hops* b, std::size_t k) {
  const __m256i sentinel = _mm256_set1_epi32(-1);
  __m256i best = sentinel;
  std::size_t i = 0;
  for (; i + 8 <= k; i += 8) {
    const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    const __m256i invalid = _mm256_or_si256(_mm256_cmpeq_epi32(va, sentinel), _mm256_cmpeq_epi32(vb, sentinel));
    const __m256i sum = _mm256_or_si256(_mm256_add_epi32(va, vb), invalid);
    best = _mm256_min_epu32(best, sum);
  }
  Hops out = hmin_epu32(best);
  for (; i < k; ++i) {
    if (a[i] == kUnreachable || b[i] == kUnreachable) continue;
    out = std::min(out, a[i] + b[i]);
  }
  return out;
}

Hops min_u32_avx2(const Hops* a, std::size_t k) {
  __m256i best = _mm256_set1_epi32(-1);
  std::size_t i = 0;
  for (; i + 8 <= k; i += 8) {
    best = _mm256_min_epu32(best, _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i)));
  }
  Hops out = hmin_epu32(best);
  for (; i < k; ++i) out = std::min(out, a[i]);
  return out;
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  double s = hsum_pd(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double squared_distance_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4));
    acc0 = _mm256_fmadd_pd(d0, d0, acc0);
    acc1 = _mm256_fmadd_pd(d1, d1, acc1);
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc0 = _mm256_fmadd_pd(d0, d0, acc0);
  }
  double s = hsum_pd(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace

namespace detail {
const Kernels kAvx2Kernels{Isa::kAvx2,  "avx2",          &min_plus_avx2, &min_u32_avx2,
                           &dot_avx2,   &squared_distance_avx2, &axpy_avx2};
}

}  // namespace nodetok::simd
