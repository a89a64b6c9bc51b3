#pragma once

#include "cwm/density.hpp"

namespace cwm {

// n observations stored as an n x (d_x + d_y) column-major matrix with the
// covariates in the first d_x columns. Row order is the observation order.
class Dataset {
 public:
  Dataset() = default;
  Dataset(Matrix values, int d_x, int d_y);

  Eigen::Index n() const { return values_.rows(); }
  int d_x() const { return d_x_; }
  int d_y() const { return d_y_; }
  const Matrix& values() const { return values_; }

  auto x() const { return values_.leftCols(d_x_); }
  auto y() const { return values_.rightCols(d_y_); }

  // Column pointers for the SIMD kernels (leading dimension n()).
  const double* x_cols() const { return values_.data(); }
  const double* y_cols() const { return values_.data() + static_cast<Eigen::Index>(d_x_) * n(); }

 private:
  Matrix values_;
  int d_x_ = 0;
  int d_y_ = 0;
};

}  // namespace cwm
