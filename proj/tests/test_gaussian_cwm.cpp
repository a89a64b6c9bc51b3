#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cwm/ecm.hpp"
#include "cwm/gaussian_cwm.hpp"
#include "cwm/simulate.hpp"
#include "naive_oracle.hpp"
#include "test_support.hpp"

using namespace cwm;

TEST_CASE("noiseless single-component line") {
  Matrix m(30, 3);
  for (int i = 0; i < 30; ++i) {
    const double x1 = std::sin(i * 0.7), x2 = std::cos(i * 1.3);
    m(i, 0) = x1;
    m(i, 1) = x2;
    m(i, 2) = -1.0 + 0.5 * x1 + 4.0 * x2;
  }
  const Dataset d(m, 2, 1);
  const auto fit = fit_gaussian_cwm(d, 1, Matrix::Ones(30, 1), 1e-4, 100);
  const auto& c = fit.params.components[0];
  CHECK(std::abs(c.beta(0, 0) + 1.0) < 1e-8);
  CHECK(std::abs(c.beta(1, 0) - 0.5) < 1e-8);
  CHECK(std::abs(c.beta(2, 0) - 4.0) < 1e-8);
  CHECK(c.sigma_y(0, 0) > 0.0);
  CHECK(c.sigma_y(0, 0) < 1e-7);
}

TEST_CASE("log-likelihood equals the contaminated density in the nested limit") {
  std::mt19937_64 rng(51);
  CwmParams p = test::random_params(2, 2, 1, rng);
  const Dataset d = test::scenario_dataset(Scenario::A, 20, 52);
  const Dataset small(d.values().leftCols(3), 2, 1);
  const GaussianCwmParams g = GaussianCwmParams::from_cwm(p);
  for (auto& c : p.components) {
    c.x_block.alpha = c.y_block.alpha_y = 1.0 - 1e-12;
    c.x_block.eta = c.y_block.eta_y = 1.0 + 1e-12;
  }
  double total = 0.0;
  for (Eigen::Index i = 0; i < small.n(); ++i) {
    total += joint_log_density(small.x().row(i).transpose(), small.y().row(i).transpose(), p);
  }
  CHECK(std::abs(gaussian_cwm_log_likelihood(small, g) - total) < 1e-9);
}

TEST_CASE("single point at the component mean") {
  GaussianCwmParams g;
  g.d_x = 2;
  g.d_y = 1;
  Matrix sx(2, 2);
  sx << 2.0, 0.3, 0.3, 1.0;
  Matrix beta(3, 1);
  beta << 1.0, 2.0, -1.0;
  g.components.push_back({1.0, Vector::Constant(2, 0.5), sx, beta, Matrix::Constant(1, 1, 0.25)});
  Matrix m(1, 3);
  m << 0.5, 0.5, 1.0 + 2.0 * 0.5 - 0.5;
  const double log2pi = std::log(2.0 * std::numbers::pi);
  const double expected = -log2pi - 0.5 * std::log(sx.determinant()) - 0.5 * log2pi - 0.5 * std::log(0.25);
  CHECK(gaussian_cwm_log_likelihood(Dataset(m, 2, 1), g) == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("EM trace is monotone and the M-step matches the loop oracle") {
  for (int s = 0; s < 5; ++s) {
    const Dataset d = test::scenario_dataset(s % 2 ? Scenario::A : Scenario::B, 200, 60 + s);
    FitConfig c;
    c.k = 2;
    c.seed = s;
    const auto start = initialize(d, c);
    const auto fit = fit_gaussian_cwm(d, 2, start.z, 1e-6, 500);
    for (std::size_t t = 1; t < fit.loglik_trace.size(); ++t) {
      CHECK(fit.loglik_trace[t] >= fit.loglik_trace[t - 1] - 1e-8);
    }
    CHECK(test::max_param_diff(gaussian_cwm_m_step(d, start.z).to_cwm(),
                               test::naive_gaussian_m_step(d, start.z)) < 1e-12);
  }
}

TEST_CASE("Scenario A bias of beta over 100 replications") {
  const CwmParams truth = scenario_params(Scenario::A);
  std::vector<Matrix> bias(2, Matrix::Zero(3, 2));
  int ok = 0;
  for (int r = 0; r < 100; ++r) {
    const Dataset d = test::scenario_dataset(Scenario::A, 200, derive_seed(2024, r));
    FitConfig c;
    c.k = 2;
    c.seed = derive_seed(7, r);
    c.family = Family::Gaussian;
    const FitResult f = fit(d, c);
    const auto perm = match_labels(f.params, truth);
    for (int j = 0; j < 2; ++j) {
      bias[j] += f.params.components[perm[j]].y_block.beta - truth.components[j].y_block.beta;
    }
    ++ok;
  }
  double worst = 0.0;
  for (auto& b : bias) worst = std::max(worst, (b / ok).cwiseAbs().maxCoeff());
  MESSAGE("max |bias| = " << worst);
  CHECK(worst < 0.05);
}
