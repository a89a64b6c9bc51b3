#pragma once

// Weighted moments shared by the mixture M-steps. Internal header.

#include "cwm/density.hpp"

namespace cwm::detail {

// sum_i w_i * row_i / w_sum over an n x d column-major block.
Vector weighted_mean(const double* cols, Eigen::Index ld, Eigen::Index n, Eigen::Index d,
                     const Vector& w, double w_sum);

// sum_i w_i * c_i c_i' / divisor where c_i is row i of `centered`.
Matrix weighted_scatter(const Matrix& centered, const Vector& w, double divisor);

// Symmetrizes S; adds floor * I when a Cholesky pivot fails or falls below
// floor. Throws NotPositiveDefinite if that is still not enough.
Matrix floored_covariance(Matrix s, double floor);

}  // namespace cwm::detail
