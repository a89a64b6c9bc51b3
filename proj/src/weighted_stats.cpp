#include "weighted_stats.hpp"

#include "cwm/kernels.hpp"

namespace cwm::detail {

Vector weighted_mean(const double* cols, Eigen::Index ld, Eigen::Index n, Eigen::Index d,
                     const Vector& w, double w_sum) {
  const auto& k = kernels::active();
  Vector mu(d);
  for (Eigen::Index p = 0; p < d; ++p) {
    mu(p) = k.weighted_sum(w.data(), cols + p * ld, static_cast<std::size_t>(n)) / w_sum;
  }
  return mu;
}

Matrix weighted_scatter(const Matrix& centered, const Vector& w, double divisor) {
  const auto& k = kernels::active();
  const Eigen::Index d = centered.cols();
  const auto n = static_cast<std::size_t>(centered.rows());
  Matrix s(d, d);
  for (Eigen::Index p = 0; p < d; ++p) {
    for (Eigen::Index q = 0; q <= p; ++q) {
      const double v = k.weighted_dot(w.data(), centered.col(p).data(), centered.col(q).data(), n);
      s(p, q) = v / divisor;
      s(q, p) = s(p, q);
    }
  }
  return s;
}

Matrix floored_covariance(Matrix s, double floor) {
  s = 0.5 * (s + s.transpose()).eval();
  bool needs_floor = false;
  try {
    const CovFactor f = factor_covariance(s);
    needs_floor = (f.lower().diagonal().array().square() < floor).any();
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotPositiveDefinite) throw;
    needs_floor = true;
  }
  if (needs_floor) {
    s += floor * Matrix::Identity(s.rows(), s.cols());
    factor_covariance(s);
  }
  return s;
}

}  // namespace cwm::detail
