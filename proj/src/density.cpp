#include "cwm/density.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "cwm/kernels.hpp"

namespace cwm {
namespace {

void check_dims(const Vector& w, const Vector& mu, const CovFactor& factor) {
  if (w.size() != factor.dim() || mu.size() != factor.dim()) {
    std::ostringstream msg;
    msg << "vector sizes " << w.size() << "/" << mu.size() << " vs factor dimension "
        << factor.dim();
    throw Error(ErrorCode::DimensionMismatch, msg.str());
  }
}

}  // namespace

double log_add_exp(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == -std::numeric_limits<double>::infinity()) return a;
  return a + std::log1p(std::exp(b - a));
}

CovFactor factor_covariance(const Matrix& sigma) {
  if (sigma.rows() != sigma.cols() || sigma.rows() == 0) {
    throw Error(ErrorCode::InvalidArgument, "covariance must be square and non-empty");
  }
  const Eigen::Index d = sigma.rows();
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      if (std::abs(sigma(i, j) - sigma(j, i)) > 1e-12) {
        throw Error(ErrorCode::InvalidArgument, "covariance is not symmetric");
      }
    }
  }
  // Plain column Cholesky so a non-positive pivot is reported as such.
  Matrix lower = Matrix::Zero(d, d);
  double log_det = 0.0;
  for (Eigen::Index j = 0; j < d; ++j) {
    double pivot = sigma(j, j);
    for (Eigen::Index q = 0; q < j; ++q) pivot -= lower(j, q) * lower(j, q);
    if (!(pivot > 0.0) || !std::isfinite(pivot)) {
      std::ostringstream msg;
      msg << "pivot " << j << " is " << pivot;
      throw Error(ErrorCode::NotPositiveDefinite, msg.str());
    }
    const double diag = std::sqrt(pivot);
    lower(j, j) = diag;
    log_det += 2.0 * std::log(diag);
    for (Eigen::Index i = j + 1; i < d; ++i) {
      double s = sigma(i, j);
      for (Eigen::Index q = 0; q < j; ++q) s -= lower(i, q) * lower(j, q);
      lower(i, j) = s / diag;
    }
  }
  return CovFactor(std::move(lower), log_det);
}

double mahalanobis_sq(const Vector& w, const Vector& mu, const CovFactor& factor) {
  check_dims(w, mu, factor);
  const Vector r = factor.lower().triangularView<Eigen::Lower>().solve(w - mu);
  return r.squaredNorm();
}

double log_gaussian_pdf(const Vector& w, const Vector& mu, const CovFactor& factor) {
  const double delta = mahalanobis_sq(w, mu, factor);
  return log_gaussian_from_delta(delta, static_cast<int>(factor.dim()), factor.log_det());
}

void check_contamination(double alpha, double eta) {
  if (!(alpha > 0.0 && alpha <= 1.0) || !(eta >= 1.0) || !std::isfinite(eta)) {
    std::ostringstream msg;
    msg << "alpha=" << alpha << " eta=" << eta;
    throw Error(ErrorCode::InvalidContamination, msg.str());
  }
}

ContaminatedTerms contaminated_terms(double delta, int d, double log_det, double alpha,
                                     double eta) {
  const double typical = std::log(alpha) + log_gaussian_from_delta(delta, d, log_det);
  if (alpha == 1.0) return {typical, 1.0};
  const double inflated = std::log1p(-alpha) +
                          log_gaussian_from_delta(delta / eta, d, log_det + d * std::log(eta));
  const double total = log_add_exp(typical, inflated);
  return {total, std::exp(typical - total)};
}

double log_contaminated_pdf(const Vector& w, const Vector& mu, const CovFactor& factor,
                            double alpha, double eta) {
  check_contamination(alpha, eta);
  const double delta = mahalanobis_sq(w, mu, factor);
  return contaminated_terms(delta, static_cast<int>(factor.dim()), factor.log_det(), alpha, eta)
      .log_density;
}

double weight_g(double delta, double alpha, double eta, int d) {
  check_contamination(alpha, eta);
  if (alpha == 1.0) return 1.0;
  // log of the inflated-to-typical density ratio
  const double t = std::log1p(-alpha) - std::log(alpha) - 0.5 * d * std::log(eta) +
                   0.5 * delta * (1.0 - 1.0 / eta);
  if (t > 0.0) {
    const double e = std::exp(-t);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(t));
}

double weight_w(double delta, double alpha, double eta, int d) {
  const double g = weight_g(delta, alpha, eta, d);
  return (1.0 + (eta - 1.0) * g) / eta;
}

void mahalanobis_sq_batch(const double* cols, Eigen::Index ld, Eigen::Index n, const Vector& mu,
                          const CovFactor& factor, std::span<double> out) {
  if (mu.size() != factor.dim() || static_cast<Eigen::Index>(out.size()) < n) {
    throw Error(ErrorCode::DimensionMismatch, "batch distance dimensions disagree");
  }
  kernels::active().mahalanobis_batch(cols, static_cast<std::size_t>(ld),
                                      static_cast<std::size_t>(n),
                                      static_cast<std::size_t>(factor.dim()), mu.data(),
                                      factor.lower().data(), out.data());
}

void mahalanobis_sq_rows(const Matrix& rows, const Vector& mu, const CovFactor& factor,
                         std::span<double> out) {
  if (rows.cols() != factor.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "row width disagrees with factor dimension");
  }
  mahalanobis_sq_batch(rows.data(), rows.rows(), rows.rows(), mu, factor, out);
}

}  // namespace cwm
