#pragma once

// Gaussian and contaminated-Gaussian log-densities, squared Mahalanobis
// distances, and the typical-point weight functions g and w.
//
// Everything is evaluated in log space. A contaminated Gaussian with proportion
// of typical points alpha and inflation eta is
//   alpha * phi(w; mu, Sigma) + (1 - alpha) * phi(w; mu, eta * Sigma),
// and shares one Cholesky factor between the two terms.

#include <Eigen/Dense>
#include <span>

#include "cwm/errors.hpp"

namespace cwm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kLog2Pi = 1.8378770664093454835606594728112;

class CovFactor {
 public:
  CovFactor() = default;
  CovFactor(Matrix lower, double log_det) : lower_(std::move(lower)), log_det_(log_det) {}

  Eigen::Index dim() const { return lower_.rows(); }
  const Matrix& lower() const { return lower_; }
  double log_det() const { return log_det_; }

  Matrix covariance() const { return lower_ * lower_.transpose(); }

 private:
  Matrix lower_;
  double log_det_ = 0.0;
};

// Throws NotPositiveDefinite when a pivot is <= 0, InvalidArgument when sigma is
// not square or not symmetric within 1e-12.
CovFactor factor_covariance(const Matrix& sigma);

double mahalanobis_sq(const Vector& w, const Vector& mu, const CovFactor& factor);

double log_gaussian_pdf(const Vector& w, const Vector& mu, const CovFactor& factor);

// alpha in (0, 1], eta >= 1; alpha == 1 or eta == 1 is the nested Gaussian case.
double log_contaminated_pdf(const Vector& w, const Vector& mu, const CovFactor& factor,
                            double alpha, double eta);

// Posterior probability that a point at squared distance delta belongs to the
// typical (non-inflated) sub-component, for a d-dimensional block.
double weight_g(double delta, double alpha, double eta, int d);

// Effective weight of that point in the mean / regression updates:
// (1 / eta) * (1 + (eta - 1) * g).
double weight_w(double delta, double alpha, double eta, int d);

void check_contamination(double alpha, double eta);

// Log-density and typical-posterior of a contaminated Gaussian given a
// precomputed squared distance. Shared by the scalar API and the batched E-step.
struct ContaminatedTerms {
  double log_density;
  double typical_posterior;
};

ContaminatedTerms contaminated_terms(double delta, int d, double log_det, double alpha,
                                     double eta);

inline double log_gaussian_from_delta(double delta, int d, double log_det) {
  return -0.5 * (d * kLog2Pi + log_det + delta);
}

// Squared distances of every row of an n x d column-major block (leading
// dimension ld) from mu, using the active SIMD kernel.
void mahalanobis_sq_batch(const double* cols, Eigen::Index ld, Eigen::Index n, const Vector& mu,
                          const CovFactor& factor, std::span<double> out);

// Row-wise overload for Eigen blocks stored column-major.
void mahalanobis_sq_rows(const Matrix& rows, const Vector& mu, const CovFactor& factor,
                         std::span<double> out);

// log(exp(a) + exp(b)) with -inf handled.
double log_add_exp(double a, double b);

}  // namespace cwm
