#include "cwm/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cwm/ecm.hpp"
#include "weighted_stats.hpp"

namespace cwm {
namespace {

int nearest(const Vector& p, const std::vector<Vector>& centers, double* dist_sq = nullptr) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centers.size(); ++c) {
    const double d = (p - centers[c]).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(c);
    }
  }
  if (dist_sq != nullptr) *dist_sq = best_d;
  return best;
}

void check_hard_assignment(const std::vector<int>& labels, int k, Eigen::Index min_size,
                           const char* stage) {
  std::vector<Eigen::Index> counts(static_cast<std::size_t>(k), 0);
  for (int l : labels) ++counts[static_cast<std::size_t>(l)];
  for (int j = 0; j < k; ++j) {
    if (counts[static_cast<std::size_t>(j)] < min_size) {
      std::ostringstream msg;
      msg << stage << ": cluster " << j + 1 << " has " << counts[static_cast<std::size_t>(j)]
          << " points";
      throw Error(ErrorCode::InitializationFailure, msg.str());
    }
  }
}

}  // namespace

std::vector<Vector> kmeans_plus_plus(const Matrix& points, int k, std::mt19937_64& rng) {
  const Eigen::Index n = points.rows();
  if (k < 1 || n < k) throw Error(ErrorCode::InitializationFailure, "fewer points than clusters");
  std::vector<Vector> centers;
  std::uniform_int_distribution<Eigen::Index> first(0, n - 1);
  centers.emplace_back(points.row(first(rng)).transpose());

  // Greedy variant: draw 2 + ln(k) candidates by D^2 sampling and keep the one
  // that lowers the potential most.
  const int trials = 2 + static_cast<int>(std::log(static_cast<double>(k)));
  std::vector<double> d2(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    d2[static_cast<std::size_t>(i)] = (points.row(i).transpose() - centers[0]).squaredNorm();
  }
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> cand_d2(static_cast<std::size_t>(n));
  std::vector<double> best_d2(static_cast<std::size_t>(n));
  while (static_cast<int>(centers.size()) < k) {
    double total = 0.0;
    for (double v : d2) total += v;
    if (!(total > 0.0)) throw Error(ErrorCode::InitializationFailure, "all points coincide");
    Eigen::Index best_pick = -1;
    double best_potential = std::numeric_limits<double>::infinity();
    for (int t = 0; t < trials; ++t) {
      const double target = unif(rng) * total;
      double acc = 0.0;
      Eigen::Index pick = n - 1;
      for (Eigen::Index i = 0; i < n; ++i) {
        acc += d2[static_cast<std::size_t>(i)];
        if (acc > target && d2[static_cast<std::size_t>(i)] > 0.0) {
          pick = i;
          break;
        }
      }
      double potential = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        cand_d2[ui] = std::min(d2[ui], (points.row(i) - points.row(pick)).squaredNorm());
        potential += cand_d2[ui];
      }
      if (potential < best_potential) {
        best_potential = potential;
        best_pick = pick;
        best_d2.swap(cand_d2);
      }
    }
    centers.emplace_back(points.row(best_pick).transpose());
    d2.swap(best_d2);
  }
  return centers;
}

std::vector<int> kmeans_labels(const Matrix& points, std::vector<Vector> centers, int max_iter) {
  const Eigen::Index n = points.rows();
  const auto k = centers.size();
  std::vector<int> labels(static_cast<std::size_t>(n), -1);
  for (int it = 0; it < max_iter; ++it) {
    bool changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      const int l = nearest(points.row(i).transpose(), centers);
      if (l != labels[static_cast<std::size_t>(i)]) {
        labels[static_cast<std::size_t>(i)] = l;
        changed = true;
      }
    }
    if (!changed) break;
    std::vector<Vector> sums(k, Vector::Zero(points.cols()));
    std::vector<int> counts(k, 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto l = static_cast<std::size_t>(labels[static_cast<std::size_t>(i)]);
      sums[l] += points.row(i).transpose();
      ++counts[l];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] > 0) centers[c] = sums[c] / counts[c];
    }
  }
  return labels;
}

GaussianMixtureFit fit_gaussian_mixture(const Matrix& points, int k, std::mt19937_64& rng,
                                        double epsilon, int max_iter, double cov_floor) {
  const Eigen::Index n = points.rows();
  const Eigen::Index d = points.cols();
  const auto centers = kmeans_plus_plus(points, k, rng);
  const auto labels = kmeans_labels(points, centers);
  check_hard_assignment(labels, k, d + 1, "k-means");

  GaussianMixtureFit out;
  out.z = Matrix::Zero(n, k);
  for (Eigen::Index i = 0; i < n; ++i) out.z(i, labels[static_cast<std::size_t>(i)]) = 1.0;
  out.weights.resize(static_cast<std::size_t>(k));
  out.means.resize(static_cast<std::size_t>(k));
  out.covariances.resize(static_cast<std::size_t>(k));

  Matrix log_terms(n, k);
  std::vector<double> delta(static_cast<std::size_t>(n));
  for (int it = 0; it < max_iter; ++it) {
    // M-step
    for (int j = 0; j < k; ++j) {
      const Vector w = out.z.col(j);
      const double nj = w.sum();
      if (!(nj > 0.0)) throw Error(ErrorCode::InitializationFailure, "empty mixture component");
      const auto uj = static_cast<std::size_t>(j);
      out.weights[uj] = nj / static_cast<double>(n);
      out.means[uj] = detail::weighted_mean(points.data(), n, n, d, w, nj);
      const Matrix centered = points.rowwise() - out.means[uj].transpose();
      out.covariances[uj] =
          detail::floored_covariance(detail::weighted_scatter(centered, w, nj), cov_floor);
    }
    // E-step
    for (int j = 0; j < k; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      const CovFactor f = factor_covariance(out.covariances[uj]);
      mahalanobis_sq_rows(points, out.means[uj], f, delta);
      for (Eigen::Index i = 0; i < n; ++i) {
        log_terms(i, j) = std::log(out.weights[uj]) +
                          log_gaussian_from_delta(delta[static_cast<std::size_t>(i)],
                                                  static_cast<int>(d), f.log_det());
      }
    }
    double loglik = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double m = log_terms.row(i).maxCoeff();
      const double lse = m + std::log((log_terms.row(i).array() - m).exp().sum());
      if (!std::isfinite(lse)) throw Error(ErrorCode::DegenerateDensity, "mixture density underflow");
      out.z.row(i) = (log_terms.row(i).array() - lse).exp();
      loglik += lse;
    }
    out.loglik_trace.push_back(loglik);
    const auto t = out.loglik_trace.size();
    if (t >= 3 && aitken_converged(out.loglik_trace[t - 3], out.loglik_trace[t - 2],
                                   out.loglik_trace[t - 1], epsilon)) {
      break;
    }
  }

  std::vector<int> map(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index arg = 0;
    out.z.row(i).maxCoeff(&arg);
    map[static_cast<std::size_t>(i)] = static_cast<int>(arg);
  }
  check_hard_assignment(map, k, 1, "gaussian mixture");
  return out;
}

}  // namespace cwm
