#include "cwm/ecm.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "cwm/gaussian_cwm.hpp"
#include "cwm/gmm.hpp"
#include "cwm/golden.hpp"
#include "cwm/kernels.hpp"
#include "ecm_detail.hpp"
#include "weighted_stats.hpp"

namespace cwm {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double one_plus_ulp() { return std::nextafter(1.0, 2.0); }

Matrix regression_residuals(const Dataset& data, const Matrix& beta) {
  Matrix r = data.y();
  r.rowwise() -= beta.row(0);
  r.noalias() -= data.x() * beta.bottomRows(data.d_x());
  return r;
}

}  // namespace

void FitConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); };
  if (k < 1) fail("k must be >= 1");
  if (!(alpha_star >= 0.0 && alpha_star < 1.0)) fail("alpha_star must be in [0,1)");
  if (!(eta_star > 1.0) || !std::isfinite(eta_star)) fail("eta_star must be > 1");
  if (!(epsilon > 0.0)) fail("epsilon must be positive");
  if (!(w0 > 0.0 && w0 < 1.0)) fail("w0 must be in (0,1)");
  if (max_iter < 1) fail("max_iter must be >= 1");
  if (restarts < 1) fail("restarts must be >= 1");
  if (!(cov_floor > 0.0)) fail("cov_floor must be positive");
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  // splitmix64 finalizer over (base, index)
  std::uint64_t x = base + 0x9E3779B97F4A7C15ULL * (index + 1);
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

namespace detail {

BlockDistances block_distances(const Dataset& data, const CwmParams& params,
                               const std::vector<ComponentFactors>& factors) {
  const Eigen::Index n = data.n();
  const int k = params.k();
  BlockDistances out{Matrix(n, k), Matrix(n, k)};
  const Vector zero_y = Vector::Zero(data.d_y());
  for (int j = 0; j < k; ++j) {
    const auto& c = params.components[static_cast<std::size_t>(j)];
    const auto& f = factors[static_cast<std::size_t>(j)];
    mahalanobis_sq_batch(data.x_cols(), n, n, c.x_block.mu, f.x,
                         std::span<double>(out.x.col(j).data(), static_cast<std::size_t>(n)));
    const Matrix r = regression_residuals(data, c.y_block.beta);
    mahalanobis_sq_batch(r.data(), n, n, zero_y, f.y,
                         std::span<double>(out.y.col(j).data(), static_cast<std::size_t>(n)));
  }
  return out;
}

CwmParams conditional_max_step1(const Dataset& data, const Responsibilities& resp,
                                const CwmParams& prev, const FitConfig& config, bool gaussian) {
  const Eigen::Index n = data.n();
  const int k = prev.k();
  const int dx = data.d_x();
  const int dy = data.d_y();
  if (resp.z.rows() != n || resp.z.cols() != k || resp.u.rows() != n || resp.u.cols() != k ||
      resp.v.rows() != n || resp.v.cols() != k) {
    throw Error(ErrorCode::DimensionMismatch, "responsibilities do not match data and k");
  }
  const auto& kern = kernels::active();
  const auto un = static_cast<std::size_t>(n);

  CwmParams next = prev;
  for (int j = 0; j < k; ++j) {
    auto& c = next.components[static_cast<std::size_t>(j)];
    const Vector zj = resp.z.col(j);
    const double nj = zj.sum();
    if (!(nj >= dx + dy + 2)) {
      std::ostringstream msg;
      msg << "component " << j + 1 << " has effective size " << nj;
      throw Error(ErrorCode::SingularDesign, msg.str());
    }
    c.pi = nj / static_cast<double>(n);

    // X block
    Vector wx = zj;
    if (!gaussian) {
      const double inv_eta = 1.0 / c.x_block.eta;
      wx = zj.array() * (resp.v.col(j).array() + (1.0 - resp.v.col(j).array()) * inv_eta);
      c.x_block.alpha = maximize_alpha(kern.weighted_sum(zj.data(), resp.v.col(j).data(), un), nj,
                                       config.alpha_star, config.numeric_alpha);
    }
    c.x_block.mu = detail::weighted_mean(data.x_cols(), n, n, dx, wx, wx.sum());
    const Matrix centered = data.x().rowwise() - c.x_block.mu.transpose();
    c.x_block.sigma =
        detail::floored_covariance(detail::weighted_scatter(centered, wx, nj), config.cov_floor);

    // Y | x block: weighted least squares on x* = (1, x)
    Vector wy = zj;
    if (!gaussian) {
      const double inv_eta = 1.0 / c.y_block.eta_y;
      wy = zj.array() * (resp.u.col(j).array() + (1.0 - resp.u.col(j).array()) * inv_eta);
      c.y_block.alpha_y = maximize_alpha(kern.weighted_sum(zj.data(), resp.u.col(j).data(), un),
                                         nj, config.alpha_star, config.numeric_alpha);
    }
    const double* xc = data.x_cols();
    const double* yc = data.y_cols();
    Matrix gram(dx + 1, dx + 1);
    Matrix cross(dx + 1, dy);
    gram(0, 0) = wy.sum();
    for (int p = 0; p < dx; ++p) {
      gram(0, p + 1) = gram(p + 1, 0) = kern.weighted_sum(wy.data(), xc + p * n, un);
      for (int q = 0; q <= p; ++q) {
        gram(p + 1, q + 1) = gram(q + 1, p + 1) =
            kern.weighted_dot(wy.data(), xc + p * n, xc + q * n, un);
      }
    }
    for (int col = 0; col < dy; ++col) {
      cross(0, col) = kern.weighted_sum(wy.data(), yc + col * n, un);
      for (int p = 0; p < dx; ++p) {
        cross(p + 1, col) = kern.weighted_dot(wy.data(), xc + p * n, yc + col * n, un);
      }
    }
    Eigen::LLT<Matrix> llt(gram);
    if (llt.info() != Eigen::Success || !(llt.rcond() > 1e-13)) {
      std::ostringstream msg;
      msg << "weighted Gram matrix of component " << j + 1 << " is singular";
      throw Error(ErrorCode::SingularDesign, msg.str());
    }
    c.y_block.beta = llt.solve(cross);
    const Matrix resid = regression_residuals(data, c.y_block.beta);
    c.y_block.sigma_y =
        detail::floored_covariance(detail::weighted_scatter(resid, wy, nj), config.cov_floor);
  }
  return next;
}

}  // namespace detail

EStepResult e_step_with_loglik(const Dataset& data, const CwmParams& params) {
  if (data.d_x() != params.d_x || data.d_y() != params.d_y) {
    throw Error(ErrorCode::DimensionMismatch, "data and parameter dimensions differ");
  }
  const Eigen::Index n = data.n();
  const int k = params.k();
  const auto factors = factorize(params);
  const auto dist = detail::block_distances(data, params, factors);

  EStepResult out;
  out.resp.z.resize(n, k);
  out.resp.u.resize(n, k);
  out.resp.v.resize(n, k);
  Matrix& log_z = out.resp.z;
  for (int j = 0; j < k; ++j) {
    const auto& c = params.components[static_cast<std::size_t>(j)];
    const auto& f = factors[static_cast<std::size_t>(j)];
    const double log_pi = std::log(c.pi);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto tx = contaminated_terms(dist.x(i, j), params.d_x, f.x.log_det(), c.x_block.alpha,
                                         c.x_block.eta);
      const auto ty = contaminated_terms(dist.y(i, j), params.d_y, f.y.log_det(),
                                         c.y_block.alpha_y, c.y_block.eta_y);
      out.resp.v(i, j) = tx.typical_posterior;
      out.resp.u(i, j) = ty.typical_posterior;
      log_z(i, j) = log_pi + tx.log_density + ty.log_density;
    }
  }
  double loglik = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double m = log_z.row(i).maxCoeff();
    if (!(m > kNegInf) || !std::isfinite(m)) {
      std::ostringstream msg;
      msg << "all component densities vanish at row " << i + 1;
      throw Error(ErrorCode::DegenerateDensity, msg.str());
    }
    double s = 0.0;
    for (int j = 0; j < k; ++j) s += std::exp(log_z(i, j) - m);
    const double lse = m + std::log(s);
    for (int j = 0; j < k; ++j) log_z(i, j) = std::exp(log_z(i, j) - lse);
    loglik += lse;
  }
  out.loglik = loglik;
  return out;
}

Responsibilities e_step(const Dataset& data, const CwmParams& params) {
  return e_step_with_loglik(data, params).resp;
}

double observed_log_likelihood(const Dataset& data, const CwmParams& params) {
  return e_step_with_loglik(data, params).loglik;
}

CwmParams cm_step1(const Dataset& data, const Responsibilities& resp, const CwmParams& params_prev,
                   const FitConfig& config) {
  return detail::conditional_max_step1(data, resp, params_prev, config, false);
}

CwmParams cm_step2(const Dataset& data, const Responsibilities& resp,
                   const CwmParams& params_after_cm1, const FitConfig& config) {
  const auto& kern = kernels::active();
  const auto n = static_cast<std::size_t>(data.n());
  CwmParams next = params_after_cm1;
  const auto factors = factorize(next);
  const auto dist = detail::block_distances(data, next, factors);
  for (int j = 0; j < next.k(); ++j) {
    auto& c = next.components[static_cast<std::size_t>(j)];
    const Vector zj = resp.z.col(j);
    const Vector atyp_x = 1.0 - resp.v.col(j).array();
    const Vector atyp_y = 1.0 - resp.u.col(j).array();
    c.x_block.eta = maximize_eta(kern.weighted_sum(zj.data(), atyp_x.data(), n),
                                 kern.weighted_dot(zj.data(), atyp_x.data(), dist.x.col(j).data(), n),
                                 next.d_x, config.eta_star);
    c.y_block.eta_y =
        maximize_eta(kern.weighted_sum(zj.data(), atyp_y.data(), n),
                     kern.weighted_dot(zj.data(), atyp_y.data(), dist.y.col(j).data(), n),
                     next.d_y, config.eta_star);
  }
  return next;
}

double maximize_alpha(double typical_mass, double total_mass, double alpha_star, bool numeric) {
  const double lo = std::nextafter(alpha_star, 1.0);
  const double hi = std::nextafter(1.0, 0.0);
  if (!(total_mass > 0.0)) return hi;
  if (!numeric) return std::clamp(typical_mass / total_mass, lo, hi);
  const double atypical_mass = std::max(total_mass - typical_mass, 0.0);
  const auto objective = [&](double a) {
    return typical_mass * std::log(a) + atypical_mass * std::log1p(-a);
  };
  return golden_section_maximize(objective, lo, hi, 1e-12).x;
}

double maximize_eta(double a_mass, double b_mass, int d, double eta_star) {
  const double lo = one_plus_ulp();
  const double hi = std::max(lo, std::nextafter(eta_star, 0.0));
  if (!(a_mass > 0.0)) return lo;
  // Objective -(d/2) A log(eta) - B / (2 eta), differenced term by term so the
  // comparison keeps full precision near the flat maximum.
  const auto diff = [&](double e1, double e2) {
    return -0.5 * d * a_mass * std::log1p((e1 - e2) / e2) + 0.5 * b_mass * (e1 - e2) / (e1 * e2);
  };
  return golden_section_argmax_by_difference(diff, lo, hi, 1e-8);
}

bool aitken_converged(double l_r, double l_r1, double l_r2, double epsilon) {
  const double step = l_r1 - l_r;
  const double next_step = l_r2 - l_r1;
  if (step == 0.0) return next_step < epsilon;
  const double a = next_step / step;
  if (a >= 1.0) return next_step < epsilon;
  const double l_inf = l_r1 + next_step / (1.0 - a);
  return l_inf - l_r1 < epsilon;
}

namespace {

struct InitResult {
  Responsibilities resp;
  GaussianCwmFit gaussian;
};

InitResult initialize_once(const Dataset& data, const FitConfig& config, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto mixture = fit_gaussian_mixture(data.values(), config.k, rng, config.epsilon,
                                            config.max_iter, config.cov_floor);
  InitResult out;
  out.gaussian = fit_gaussian_cwm(data, config.k, mixture.z, config.epsilon, config.max_iter,
                                  config.cov_floor);
  std::vector<Eigen::Index> counts(static_cast<std::size_t>(config.k), 0);
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    Eigen::Index arg = 0;
    out.gaussian.z.row(i).maxCoeff(&arg);
    ++counts[static_cast<std::size_t>(arg)];
  }
  for (auto c : counts) {
    if (c == 0) throw Error(ErrorCode::InitializationFailure, "Gaussian CWM left a component empty");
  }
  out.resp.z = out.gaussian.z;
  out.resp.u = Matrix::Constant(data.n(), config.k, config.w0);
  out.resp.v = Matrix::Constant(data.n(), config.k, config.w0);
  return out;
}

// Profile search for the starting eta of each block: with everything else fixed,
// pick eta in (1, eta_star) maximizing the observed log-likelihood. eta = 1 + ulp
// is a candidate, so the result never scores below the Gaussian start.
CwmParams profile_eta_start(const Dataset& data, CwmParams params, const FitConfig& config) {
  const double lo = one_plus_ulp();
  const double hi = std::nextafter(config.eta_star, 0.0);
  constexpr int kGrid = 24;
  std::array<double, kGrid> grid{};
  for (int g = 0; g < kGrid; ++g) {
    grid[static_cast<std::size_t>(g)] =
        g == 0 ? lo : std::exp(std::log(hi) * static_cast<double>(g) / (kGrid - 1));
  }
  grid.back() = hi;

  for (int j = 0; j < params.k(); ++j) {
    for (int block = 0; block < 2; ++block) {
      auto& comp = params.components[static_cast<std::size_t>(j)];
      double& eta = block == 0 ? comp.x_block.eta : comp.y_block.eta_y;
      const auto loglik_at = [&](double e) {
        const double saved = eta;
        eta = e;
        double l = kNegInf;
        try {
          l = observed_log_likelihood(data, params);
        } catch (const Error&) {
        }
        eta = saved;
        return l;
      };
      std::size_t best = 0;
      double best_l = loglik_at(grid[0]);
      for (std::size_t g = 1; g < grid.size(); ++g) {
        const double l = loglik_at(grid[g]);
        if (l > best_l) {
          best_l = l;
          best = g;
        }
      }
      double chosen = grid[best];
      if (best > 0) {
        const double a = grid[best - 1];
        const double b = grid[std::min(best + 1, grid.size() - 1)];
        const auto refined = golden_section_maximize(loglik_at, a, b, 1e-6 * b);
        if (refined.value > best_l) chosen = refined.x;
      }
      eta = chosen;
    }
  }
  return params;
}

}  // namespace

Responsibilities initialize(const Dataset& data, const FitConfig& config) {
  config.validate();
  std::optional<Error> last;
  for (int attempt = 0; attempt < config.restarts; ++attempt) {
    try {
      return initialize_once(data, config, derive_seed(config.seed, static_cast<std::uint64_t>(attempt)))
          .resp;
    } catch (const Error& e) {
      last = e;
    }
  }
  throw Error(ErrorCode::InitializationFailure,
              last ? std::string(last->what()) : std::string("no attempt made"));
}

FitResult fit_single(const Dataset& data, const FitConfig& config, std::uint64_t seed) {
  const InitResult init = initialize_once(data, config, seed);
  const CwmParams start = init.gaussian.params.to_cwm();

  FitResult out;
  out.family = config.family;
  out.initial_gaussian_loglik = init.gaussian.loglik_trace.back();

  if (config.family == Family::Gaussian) {
    out.params = start;
    out.resp.z = init.gaussian.z;
    out.resp.u = Matrix::Ones(data.n(), config.k);
    out.resp.v = Matrix::Ones(data.n(), config.k);
    out.loglik_trace = init.gaussian.loglik_trace;
    out.iterations = init.gaussian.iterations;
    out.converged = init.gaussian.converged;
    return out;
  }

  // First iteration: CM-step 1 from the Gaussian posteriors and u = v = w0.
  // At that point CM-step 2 would return eta ~ 1 (a stationary point of the
  // eta update), so the starting eta comes from a profile search instead.
  CwmParams params = cm_step1(data, init.resp, start, config);
  params = config.profile_eta_start ? profile_eta_start(data, params, config)
                                    : cm_step2(data, init.resp, params, config);
  EStepResult e = e_step_with_loglik(data, params);
  out.loglik_trace.push_back(e.loglik);

  while (static_cast<int>(out.loglik_trace.size()) < config.max_iter) {
    params = cm_step1(data, e.resp, params, config);
    params = cm_step2(data, e.resp, params, config);
    e = e_step_with_loglik(data, params);
    out.loglik_trace.push_back(e.loglik);
    const auto t = out.loglik_trace.size();
    if (t >= 3 && aitken_converged(out.loglik_trace[t - 3], out.loglik_trace[t - 2],
                                   out.loglik_trace[t - 1], config.epsilon)) {
      out.converged = true;
      break;
    }
  }
  out.params = std::move(params);
  out.resp = std::move(e.resp);
  out.iterations = static_cast<int>(out.loglik_trace.size());
  return out;
}

FitResult fit(const Dataset& data, const FitConfig& config) {
  config.validate();
  std::optional<FitResult> best;
  std::optional<Error> last;
  for (int r = 0; r < config.restarts; ++r) {
    try {
      FitResult candidate = fit_single(data, config, derive_seed(config.seed, static_cast<std::uint64_t>(r)));
      candidate.restart = r;
      if (!best || candidate.loglik() > best->loglik()) best = std::move(candidate);
    } catch (const Error& e) {
      last = e;
    }
  }
  if (!best) throw *last;
  return std::move(*best);
}

}  // namespace cwm
