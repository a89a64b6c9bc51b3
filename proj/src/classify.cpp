#include "cwm/classify.hpp"

namespace cwm {

std::string_view category_name(Category c) {
  switch (c) {
    case Category::Typical: return "typical";
    case Category::Outlier: return "outlier";
    case Category::GoodLeverage: return "good_leverage";
    case Category::BadLeverage: return "bad_leverage";
  }
  return "typical";
}

int map_component(std::span<const double> z_row) {
  if (z_row.empty()) throw Error(ErrorCode::InvalidArgument, "empty posterior row");
  std::size_t best = 0;
  for (std::size_t j = 1; j < z_row.size(); ++j) {
    if (z_row[j] > z_row[best]) best = j;
  }
  return static_cast<int>(best) + 1;
}

Category categorize(double u_star, double v_star) {
  const bool outlier = u_star < 0.5;
  const bool leverage = v_star < 0.5;
  if (outlier && leverage) return Category::BadLeverage;
  if (outlier) return Category::Outlier;
  if (leverage) return Category::GoodLeverage;
  return Category::Typical;
}

std::vector<ObservationLabel> classify_dataset(const Dataset& data, const FitResult& fit) {
  const auto& r = fit.resp;
  if (r.z.rows() != data.n() || r.u.rows() != data.n() || r.v.rows() != data.n()) {
    throw Error(ErrorCode::DimensionMismatch, "fit responsibilities do not match the data");
  }
  std::vector<ObservationLabel> out;
  out.reserve(static_cast<std::size_t>(data.n()));
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    ObservationLabel label;
    label.z_row.resize(static_cast<std::size_t>(r.z.cols()));
    for (Eigen::Index j = 0; j < r.z.cols(); ++j) label.z_row[static_cast<std::size_t>(j)] = r.z(i, j);
    label.component = map_component(label.z_row);
    label.u_star = r.u(i, label.component - 1);
    label.v_star = r.v(i, label.component - 1);
    label.category = categorize(label.u_star, label.v_star);
    out.push_back(std::move(label));
  }
  return out;
}

}  // namespace cwm
