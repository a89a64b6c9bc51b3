#pragma once

// Small helpers shared by the unit tests.

#include <cstdint>
#include <random>
#include <vector>

#include "cwm/dataset.hpp"
#include "cwm/model.hpp"
#include "cwm/simulate.hpp"

namespace cwm::test {

inline Matrix random_spd(int d, std::mt19937_64& rng, double ridge = 0.5) {
  std::normal_distribution<double> z;
  Matrix a(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) a(i, j) = z(rng);
  }
  Matrix s = a * a.transpose() / d + ridge * Matrix::Identity(d, d);
  return 0.5 * (s + s.transpose());
}

inline Vector random_vector(int d, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> z;
  Vector v(d);
  for (int i = 0; i < d; ++i) v(i) = scale * z(rng);
  return v;
}

// Random valid parameters; alpha in (0.6, 1), eta in (1.5, 50).
inline CwmParams random_params(int k, int dx, int dy, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ua(0.6, 0.99);
  std::uniform_real_distribution<double> ue(1.5, 50.0);
  std::uniform_real_distribution<double> up(0.5, 1.5);
  CwmParams p;
  p.d_x = dx;
  p.d_y = dy;
  double total = 0.0;
  for (int j = 0; j < k; ++j) {
    ComponentParams c;
    c.pi = up(rng);
    total += c.pi;
    c.x_block.mu = random_vector(dx, rng, 3.0);
    c.x_block.sigma = random_spd(dx, rng);
    c.x_block.alpha = ua(rng);
    c.x_block.eta = ue(rng);
    c.y_block.beta = Matrix(1 + dx, dy);
    for (int r = 0; r <= dx; ++r) c.y_block.beta.row(r) = random_vector(dy, rng).transpose();
    c.y_block.sigma_y = random_spd(dy, rng);
    c.y_block.alpha_y = ua(rng);
    c.y_block.eta_y = ue(rng);
    p.components.push_back(std::move(c));
  }
  double acc = 0.0;
  for (int j = 0; j + 1 < k; ++j) {
    p.components[j].pi /= total;
    acc += p.components[j].pi;
  }
  p.components.back().pi = 1.0 - acc;
  return p;
}

inline Dataset scenario_dataset(Scenario s, int n, std::uint64_t seed) {
  const auto samples = simulate_scenario(s, n, seed);
  return Dataset(to_data_matrix(samples), 2, 2);
}

// Side of the noise box: 1.2 times the widest coordinate range of the data.
inline double noise_box_side(const Dataset& d) {
  const Matrix& v = d.values();
  return 1.2 * (v.colwise().maxCoeff() - v.colwise().minCoeff()).maxCoeff();
}

// Two regression lines in the plane (d_x = d_y = 1): component 1 has
// x ~ N(0, 1), y = 1 + 2x + e; component 2 has x ~ N(8, 1), y = 20 - x + e;
// e ~ N(0, 0.5^2). Rows alternate between the components.
struct TwoLines {
  Dataset data;
  std::vector<int> component;  // 1-based

  static constexpr double kSigmaX = 1.0;
  static constexpr double kSigmaY = 0.5;
  static double mean_x(int j) { return j == 1 ? 0.0 : 8.0; }
  static double line(int j, double x) { return j == 1 ? 1.0 + 2.0 * x : 20.0 - x; }
};

inline TwoLines two_lines(int n_per_component, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  const int n = 2 * n_per_component;
  Matrix m(n, 2);
  TwoLines out;
  for (int i = 0; i < n; ++i) {
    const int j = 1 + i % 2;
    const double x = TwoLines::mean_x(j) + TwoLines::kSigmaX * z(rng);
    m(i, 0) = x;
    m(i, 1) = TwoLines::line(j, x) + TwoLines::kSigmaY * z(rng);
    out.component.push_back(j);
  }
  out.data = Dataset(m, 1, 1);
  return out;
}

}  // namespace cwm::test
