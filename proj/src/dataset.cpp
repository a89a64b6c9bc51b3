#include "cwm/dataset.hpp"

#include <cmath>
#include <sstream>

namespace cwm {

Dataset::Dataset(Matrix values, int d_x, int d_y)
    : values_(std::move(values)), d_x_(d_x), d_y_(d_y) {
  if (d_x < 1 || d_y < 1 || values_.cols() != d_x + d_y) {
    std::ostringstream msg;
    msg << "data has " << values_.cols() << " columns, expected d_x + d_y = " << d_x + d_y;
    throw Error(ErrorCode::DimensionMismatch, msg.str());
  }
  if (values_.rows() < 1) throw Error(ErrorCode::InvalidArgument, "dataset is empty");
  for (Eigen::Index c = 0; c < values_.cols(); ++c) {
    for (Eigen::Index r = 0; r < values_.rows(); ++r) {
      if (!std::isfinite(values_(r, c))) {
        std::ostringstream msg;
        msg << "row " << r + 1 << ", column " << c + 1;
        throw Error(ErrorCode::NonFiniteValue, msg.str());
      }
    }
  }
}

}  // namespace cwm
