#pragma once

// Parameter containers for the contaminated Gaussian cluster-weighted model
// and the densities it defines.
//
// Each component j has a weight pi_j, a contaminated Gaussian law for the
// covariates X, and a contaminated Gaussian linear regression for Y | x whose
// mean is beta_j' x* with x* = (1, x). The Gaussian CWM is the special case
// alpha = eta = 1 in every block.

#include <random>
#include <vector>

#include "cwm/density.hpp"

namespace cwm {

enum class Family { Gaussian, Contaminated };

struct ContaminatedBlock {
  Vector mu;
  Matrix sigma;
  double alpha = 1.0;
  double eta = 1.0;
};

// beta has 1 + d_x rows (first row = intercepts) and d_y columns.
struct RegressionBlock {
  Matrix beta;
  Matrix sigma_y;
  double alpha_y = 1.0;
  double eta_y = 1.0;
};

struct ComponentParams {
  double pi = 0.0;
  ContaminatedBlock x_block;
  RegressionBlock y_block;
};

struct CwmParams {
  std::vector<ComponentParams> components;
  int d_x = 0;
  int d_y = 0;

  int k() const { return static_cast<int>(components.size()); }

  // Throws DimensionMismatch / InvalidArgument / InvalidContamination /
  // NotPositiveDefinite when an invariant is violated.
  void validate() const;
};

struct LabeledSample {
  Vector x;
  Vector y;
  int component = 1;  // 1-based
  bool x_typical = true;
  bool y_typical = true;
};

// Cholesky factors of one component's two covariances.
struct ComponentFactors {
  CovFactor x;
  CovFactor y;
};

std::vector<ComponentFactors> factorize(const CwmParams& params);

// beta' x* with x* = (1, x).
Vector regression_mean(const Matrix& beta, const Vector& x);

// Per-component log terms at one point: log f_X(x; j) and log f_Y(y | x; j).
struct ComponentLogTerms {
  std::vector<double> log_fx;
  std::vector<double> log_fy;
};

ComponentLogTerms component_log_terms(const Vector& x, const Vector& y, const CwmParams& params,
                                      const std::vector<ComponentFactors>& factors);

double joint_log_density(const Vector& x, const Vector& y, const CwmParams& params);
double marginal_x_log_density(const Vector& x, const CwmParams& params);
double conditional_y_log_density(const Vector& y, const Vector& x, const CwmParams& params);

// (k-1) + k * [d_x + d_x(d_x+1)/2 + (1+d_x)d_y + d_y(d_y+1)/2 + 4]; the
// Gaussian family drops the four alpha/eta terms per component.
int count_free_parameters(int k, int d_x, int d_y, Family family = Family::Contaminated);
int count_free_parameters(const CwmParams& params, Family family = Family::Contaminated);

// Draws the component from pi, then x from Sigma_X or eta_X * Sigma_X with
// probability alpha_X / 1 - alpha_X, then y | x the same way.
std::vector<LabeledSample> sample_dataset(const CwmParams& params, int n, std::mt19937_64& rng);

// n x (d_x + d_y) matrix with covariates first.
Matrix to_data_matrix(const std::vector<LabeledSample>& samples);

}  // namespace cwm
