#pragma once

// Data-parallel inner loops of the E-step and CM-steps.
//
// Every kernel has a scalar reference version and, on x86-64 builds, an AVX2
// version. The active table is chosen once at runtime from CPU support and the
// CWM_SIMD environment variable ("scalar", "avx2" or "auto").
//
// Matrices are column-major with leading dimension `ld`: column c of a block
// starts at base + c * ld, which matches Eigen's default storage.

#include <cstddef>
#include <string_view>

namespace cwm::kernels {

struct KernelTable {
  std::string_view name;

  // out[i] = (w_i - mu)' (L L')^{-1} (w_i - mu) for i < n, where w_i is row i of
  // the n x d block at `cols` and `lower` is the d x d column-major Cholesky factor.
  void (*mahalanobis_batch)(const double* cols, std::size_t ld, std::size_t n, std::size_t d,
                            const double* mu, const double* lower, double* out);

  // sum_i w[i] * a[i] * b[i]
  double (*weighted_dot)(const double* w, const double* a, const double* b, std::size_t n);

  // sum_i w[i] * a[i]
  double (*weighted_sum)(const double* w, const double* a, std::size_t n);
};

const KernelTable& scalar_table();

// nullptr when the AVX2 variant was not compiled in or the CPU lacks AVX2/FMA.
const KernelTable* avx2_table();

// The table used by the library.
const KernelTable& active();

namespace scalar {
void mahalanobis_batch(const double* cols, std::size_t ld, std::size_t n, std::size_t d,
                       const double* mu, const double* lower, double* out);
double weighted_dot(const double* w, const double* a, const double* b, std::size_t n);
double weighted_sum(const double* w, const double* a, std::size_t n);
}  // namespace scalar

namespace avx2 {
void mahalanobis_batch(const double* cols, std::size_t ld, std::size_t n, std::size_t d,
                       const double* mu, const double* lower, double* out);
double weighted_dot(const double* w, const double* a, const double* b, std::size_t n);
double weighted_sum(const double* w, const double* a, std::size_t n);
}  // namespace avx2

}  // namespace cwm::kernels
