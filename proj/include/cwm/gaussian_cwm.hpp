#pragma once

// The Gaussian CWM: every component is a Gaussian law for X times a Gaussian
// linear regression for Y | x. Fitted by EM, which is the ECM update with
// u = v = 1 and eta = 1 frozen; the updates are shared with ecm.cpp.

#include <vector>

#include "cwm/dataset.hpp"
#include "cwm/model.hpp"

namespace cwm {

struct GaussianCwmComponent {
  double pi = 0.0;
  Vector mu_x;
  Matrix sigma_x;
  Matrix beta;
  Matrix sigma_y;
};

struct GaussianCwmParams {
  std::vector<GaussianCwmComponent> components;
  int d_x = 0;
  int d_y = 0;

  int k() const { return static_cast<int>(components.size()); }

  // Nested representation with alpha = eta = 1.
  CwmParams to_cwm() const;
  static GaussianCwmParams from_cwm(const CwmParams& params);
};

struct GaussianCwmFit {
  GaussianCwmParams params;
  Matrix z;
  std::vector<double> loglik_trace;
  int iterations = 0;
  bool converged = false;
};

GaussianCwmParams gaussian_cwm_m_step(const Dataset& data, const Matrix& z,
                                      double cov_floor = 1e-8);

GaussianCwmFit fit_gaussian_cwm(const Dataset& data, int k, const Matrix& init_z, double epsilon,
                                int max_iter, double cov_floor = 1e-8);

double gaussian_cwm_log_likelihood(const Dataset& data, const GaussianCwmParams& params);

}  // namespace cwm
