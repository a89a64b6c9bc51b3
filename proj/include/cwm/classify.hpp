#pragma once

// MAP component assignment and the typical / outlier / good leverage / bad
// leverage labelling of each observation within its component.

#include <span>
#include <string_view>
#include <vector>

#include "cwm/dataset.hpp"
#include "cwm/ecm.hpp"

namespace cwm {

enum class Category { Typical, Outlier, GoodLeverage, BadLeverage };

// "typical", "outlier", "good_leverage", "bad_leverage"
std::string_view category_name(Category c);

struct ObservationLabel {
  int component = 1;  // 1-based
  Category category = Category::Typical;
  std::vector<double> z_row;
  double u_star = 1.0;
  double v_star = 1.0;
};

// 1-based index of the largest posterior; the lowest index wins ties.
int map_component(std::span<const double> z_row);

// u < 0.5 flags an outlier in Y | x, v < 0.5 a leverage point in X. The value
// 0.5 itself counts as typical.
Category categorize(double u_star, double v_star);

std::vector<ObservationLabel> classify_dataset(const Dataset& data, const FitResult& fit);

}  // namespace cwm
