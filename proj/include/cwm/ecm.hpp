#pragma once

// ECM fitting of the contaminated Gaussian CWM.
//
// One iteration is an E-step (posteriors z, u, v), CM-step 1 (pi, alpha, mu_X,
// Sigma_X, beta, Sigma_Y with eta held fixed) and CM-step 2 (eta_X, eta_Y).
// Fits start from the posteriors of a Gaussian CWM, itself started from a
// Gaussian mixture on (x, y).

#include <cstdint>
#include <vector>

#include "cwm/dataset.hpp"
#include "cwm/model.hpp"

namespace cwm {

// n x k matrices. z: component posteriors; u: posterior of not being an
// outlier (Y | x); v: posterior of not being a leverage point (X).
struct Responsibilities {
  Matrix z;
  Matrix u;
  Matrix v;
};

struct FitConfig {
  int k = 1;
  double alpha_star = 0.5;
  double eta_star = 500.0;
  double epsilon = 1e-4;
  double w0 = 0.999;
  int max_iter = 1000;
  int restarts = 5;
  std::uint64_t seed = 0;
  double cov_floor = 1e-8;
  Family family = Family::Contaminated;
  // Maximize the alpha objective by golden section instead of the exact clamp.
  bool numeric_alpha = false;
  // Choose the starting eta by maximizing the observed log-likelihood instead
  // of running CM-step 2 on the first iteration (see fit()).
  bool profile_eta_start = true;

  void validate() const;
};

struct FitResult {
  CwmParams params;
  Responsibilities resp;
  std::vector<double> loglik_trace;
  int iterations = 0;
  bool converged = false;
  Family family = Family::Contaminated;
  // Final log-likelihood of the Gaussian CWM the fit was started from.
  double initial_gaussian_loglik = 0.0;
  // Restart that produced this result.
  int restart = 0;

  double loglik() const { return loglik_trace.empty() ? 0.0 : loglik_trace.back(); }
};

struct EStepResult {
  Responsibilities resp;
  double loglik = 0.0;
};

// Throws DegenerateDensity when every component density of a row underflows.
EStepResult e_step_with_loglik(const Dataset& data, const CwmParams& params);
Responsibilities e_step(const Dataset& data, const CwmParams& params);
double observed_log_likelihood(const Dataset& data, const CwmParams& params);

CwmParams cm_step1(const Dataset& data, const Responsibilities& resp, const CwmParams& params_prev,
                   const FitConfig& config);
CwmParams cm_step2(const Dataset& data, const Responsibilities& resp,
                   const CwmParams& params_after_cm1, const FitConfig& config);

// Maximizer over (alpha_star, 1) of typical * log(a) + (total - typical) * log(1 - a).
double maximize_alpha(double typical_mass, double total_mass, double alpha_star,
                      bool numeric = false);

// Maximizer over (1, eta_star) of -(d/2) A log(eta) - B / (2 eta), by golden
// section. Returns 1 + ulp when A == 0.
double maximize_eta(double a_mass, double b_mass, int d, double eta_star);

// Aitken-accelerated stopping rule on three consecutive log-likelihoods.
bool aitken_converged(double l_r, double l_r1, double l_r2, double epsilon);

// Posteriors of the Gaussian CWM fitted from a Gaussian-mixture start, with
// u = v = w0. Throws InitializationFailure after config.restarts attempts.
Responsibilities initialize(const Dataset& data, const FitConfig& config);

FitResult fit(const Dataset& data, const FitConfig& config);

// A single start (no restarts) from the given seed. Exposed for tests.
FitResult fit_single(const Dataset& data, const FitConfig& config, std::uint64_t seed);

// Seed of restart / replication `index` derived from a base seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

}  // namespace cwm
