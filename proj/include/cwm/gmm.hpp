#pragma once

// Unconstrained Gaussian mixture on the joint vector (x, y), used to seed the
// Gaussian CWM. Started from k-means++ centers refined by Lloyd iterations.

#include <random>
#include <vector>

#include "cwm/density.hpp"

namespace cwm {

struct GaussianMixtureFit {
  std::vector<double> weights;
  std::vector<Vector> means;
  std::vector<Matrix> covariances;
  Matrix z;  // n x k posteriors
  std::vector<double> loglik_trace;
};

// Lowest index wins ties in every argmin / argmax.
std::vector<Vector> kmeans_plus_plus(const Matrix& points, int k, std::mt19937_64& rng);

// Lloyd iterations from the given centers; returns 0-based labels.
std::vector<int> kmeans_labels(const Matrix& points, std::vector<Vector> centers, int max_iter = 100);

// Throws InitializationFailure when a hard assignment leaves a cluster with
// fewer than dim + 1 points.
GaussianMixtureFit fit_gaussian_mixture(const Matrix& points, int k, std::mt19937_64& rng,
                                        double epsilon, int max_iter, double cov_floor);

}  // namespace cwm
