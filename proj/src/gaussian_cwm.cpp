#include "cwm/gaussian_cwm.hpp"

#include "cwm/ecm.hpp"
#include "ecm_detail.hpp"

namespace cwm {
namespace {

// Shape-only placeholder so the shared M-step knows k and the dimensions.
CwmParams skeleton(int k, int d_x, int d_y) {
  CwmParams p;
  p.d_x = d_x;
  p.d_y = d_y;
  p.components.resize(static_cast<std::size_t>(k));
  for (auto& c : p.components) {
    c.pi = 1.0 / k;
    c.x_block.mu = Vector::Zero(d_x);
    c.x_block.sigma = Matrix::Identity(d_x, d_x);
    c.y_block.beta = Matrix::Zero(1 + d_x, d_y);
    c.y_block.sigma_y = Matrix::Identity(d_y, d_y);
  }
  return p;
}

}  // namespace

CwmParams GaussianCwmParams::to_cwm() const {
  CwmParams p;
  p.d_x = d_x;
  p.d_y = d_y;
  for (const auto& g : components) {
    ComponentParams c;
    c.pi = g.pi;
    c.x_block = {g.mu_x, g.sigma_x, 1.0, 1.0};
    c.y_block = {g.beta, g.sigma_y, 1.0, 1.0};
    p.components.push_back(std::move(c));
  }
  return p;
}

GaussianCwmParams GaussianCwmParams::from_cwm(const CwmParams& params) {
  GaussianCwmParams g;
  g.d_x = params.d_x;
  g.d_y = params.d_y;
  for (const auto& c : params.components) {
    g.components.push_back(
        {c.pi, c.x_block.mu, c.x_block.sigma, c.y_block.beta, c.y_block.sigma_y});
  }
  return g;
}

GaussianCwmParams gaussian_cwm_m_step(const Dataset& data, const Matrix& z, double cov_floor) {
  const auto k = static_cast<int>(z.cols());
  FitConfig config;
  config.k = k;
  config.cov_floor = cov_floor;
  const Responsibilities resp{z, Matrix::Ones(z.rows(), k), Matrix::Ones(z.rows(), k)};
  return GaussianCwmParams::from_cwm(detail::conditional_max_step1(
      data, resp, skeleton(k, data.d_x(), data.d_y()), config, true));
}

GaussianCwmFit fit_gaussian_cwm(const Dataset& data, int k, const Matrix& init_z, double epsilon,
                                int max_iter, double cov_floor) {
  if (init_z.rows() != data.n() || init_z.cols() != k) {
    throw Error(ErrorCode::DimensionMismatch, "initial posteriors do not match data and k");
  }
  GaussianCwmFit out;
  Matrix z = init_z;
  while (out.iterations < max_iter) {
    out.params = gaussian_cwm_m_step(data, z, cov_floor);
    auto e = e_step_with_loglik(data, out.params.to_cwm());
    z = std::move(e.resp.z);
    out.loglik_trace.push_back(e.loglik);
    ++out.iterations;
    const auto t = out.loglik_trace.size();
    if (t >= 3 && aitken_converged(out.loglik_trace[t - 3], out.loglik_trace[t - 2],
                                   out.loglik_trace[t - 1], epsilon)) {
      out.converged = true;
      break;
    }
  }
  out.z = std::move(z);
  return out;
}

double gaussian_cwm_log_likelihood(const Dataset& data, const GaussianCwmParams& params) {
  return observed_log_likelihood(data, params.to_cwm());
}

}  // namespace cwm
