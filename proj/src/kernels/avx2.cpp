#include <immintrin.h>

#include <array>
#include <vector>

#include "cwm/kernels.hpp"

namespace cwm::kernels::avx2 {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

}  // namespace

void mahalanobis_batch(const double* cols, std::size_t ld, std::size_t n, std::size_t d,
                       const double* mu, const double* lower, double* out) {
  struct Lane {
    __m256d v;
  };
  std::array<Lane, 16> small;
  std::vector<Lane> large;
  Lane* r = small.data();
  if (d > small.size()) {
    large.resize(d);
    r = large.data();
  }

  // Four observations per pass; the triangular solve runs lane-wise.
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t p = 0; p < d; ++p) {
      __m256d s = _mm256_sub_pd(_mm256_loadu_pd(cols + p * ld + i), _mm256_set1_pd(mu[p]));
      for (std::size_t q = 0; q < p; ++q) {
        s = _mm256_fnmadd_pd(_mm256_set1_pd(lower[q * d + p]), r[q].v, s);
      }
      r[p].v = _mm256_div_pd(s, _mm256_set1_pd(lower[p * d + p]));
      acc = _mm256_fmadd_pd(r[p].v, r[p].v, acc);
    }
    _mm256_storeu_pd(out + i, acc);
  }
  if (i < n) {
    scalar::mahalanobis_batch(cols + i, ld, n - i, d, mu, lower, out + i);
  }
}

double weighted_dot(const double* w, const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256d wa0 = _mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(a + i));
    __m256d wa1 = _mm256_mul_pd(_mm256_loadu_pd(w + i + 4), _mm256_loadu_pd(a + i + 4));
    acc0 = _mm256_fmadd_pd(wa0, _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(wa1, _mm256_loadu_pd(b + i + 4), acc1);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += w[i] * a[i] * b[i];
  return acc;
}

double weighted_sum(const double* w, const double* a, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(a + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(w + i + 4), _mm256_loadu_pd(a + i + 4), acc1);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += w[i] * a[i];
  return acc;
}

}  // namespace cwm::kernels::avx2
