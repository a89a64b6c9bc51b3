#include <array>
#include <vector>

#include "cwm/kernels.hpp"

namespace cwm::kernels::scalar {

void mahalanobis_batch(const double* cols, std::size_t ld, std::size_t n, std::size_t d,
                       const double* mu, const double* lower, double* out) {
  std::array<double, 16> small{};
  std::vector<double> large;
  double* r = small.data();
  if (d > small.size()) {
    large.resize(d);
    r = large.data();
  }
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t p = 0; p < d; ++p) {
      double s = cols[p * ld + i] - mu[p];
      for (std::size_t q = 0; q < p; ++q) s -= lower[q * d + p] * r[q];
      r[p] = s / lower[p * d + p];
      acc += r[p] * r[p];
    }
    out[i] = acc;
  }
}

double weighted_dot(const double* w, const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += w[i] * a[i] * b[i];
  return acc;
}

double weighted_sum(const double* w, const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += w[i] * a[i];
  return acc;
}

}  // namespace cwm::kernels::scalar
