#include "cwm/model.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace cwm {
namespace {

double log_sum_exp(const std::vector<double>& terms) {
  double m = -std::numeric_limits<double>::infinity();
  for (double t : terms) m = std::max(m, t);
  if (m == -std::numeric_limits<double>::infinity()) return m;
  double s = 0.0;
  for (double t : terms) s += std::exp(t - m);
  return m + std::log(s);
}

void require(bool ok, ErrorCode code, const std::string& what) {
  if (!ok) throw Error(code, what);
}

}  // namespace

void CwmParams::validate() const {
  require(d_x > 0 && d_y > 0, ErrorCode::InvalidArgument, "d_x and d_y must be positive");
  require(!components.empty(), ErrorCode::InvalidArgument, "at least one component required");
  double total = 0.0;
  for (std::size_t j = 0; j < components.size(); ++j) {
    const auto& c = components[j];
    std::ostringstream where;
    where << "component " << j + 1;
    require(c.pi > 0.0 && c.pi <= 1.0, ErrorCode::InvalidArgument, where.str() + ": pi must be in (0,1]");
    total += c.pi;
    require(c.x_block.mu.size() == d_x && c.x_block.sigma.rows() == d_x &&
                c.x_block.sigma.cols() == d_x,
            ErrorCode::DimensionMismatch, where.str() + ": x block dimensions");
    require(c.y_block.beta.rows() == 1 + d_x && c.y_block.beta.cols() == d_y &&
                c.y_block.sigma_y.rows() == d_y && c.y_block.sigma_y.cols() == d_y,
            ErrorCode::DimensionMismatch, where.str() + ": regression block dimensions");
    check_contamination(c.x_block.alpha, c.x_block.eta);
    check_contamination(c.y_block.alpha_y, c.y_block.eta_y);
    factor_covariance(c.x_block.sigma);
    factor_covariance(c.y_block.sigma_y);
  }
  require(std::abs(total - 1.0) <= 1e-12, ErrorCode::InvalidArgument, "weights must sum to 1");
}

std::vector<ComponentFactors> factorize(const CwmParams& params) {
  std::vector<ComponentFactors> out;
  out.reserve(params.components.size());
  for (const auto& c : params.components) {
    out.push_back({factor_covariance(c.x_block.sigma), factor_covariance(c.y_block.sigma_y)});
  }
  return out;
}

Vector regression_mean(const Matrix& beta, const Vector& x) {
  if (beta.rows() != x.size() + 1) {
    throw Error(ErrorCode::DimensionMismatch, "beta rows must equal 1 + d_x");
  }
  return beta.row(0).transpose() + beta.bottomRows(x.size()).transpose() * x;
}

ComponentLogTerms component_log_terms(const Vector& x, const Vector& y, const CwmParams& params,
                                      const std::vector<ComponentFactors>& factors) {
  if (x.size() != params.d_x || y.size() != params.d_y) {
    std::ostringstream msg;
    msg << "point has (" << x.size() << "," << y.size() << ") dims, model has (" << params.d_x
        << "," << params.d_y << ")";
    throw Error(ErrorCode::DimensionMismatch, msg.str());
  }
  ComponentLogTerms out;
  out.log_fx.reserve(factors.size());
  out.log_fy.reserve(factors.size());
  for (std::size_t j = 0; j < factors.size(); ++j) {
    const auto& c = params.components[j];
    out.log_fx.push_back(log_contaminated_pdf(x, c.x_block.mu, factors[j].x, c.x_block.alpha,
                                              c.x_block.eta));
    out.log_fy.push_back(log_contaminated_pdf(y, regression_mean(c.y_block.beta, x),
                                              factors[j].y, c.y_block.alpha_y, c.y_block.eta_y));
  }
  return out;
}

double joint_log_density(const Vector& x, const Vector& y, const CwmParams& params) {
  const auto factors = factorize(params);
  const auto terms = component_log_terms(x, y, params, factors);
  std::vector<double> joint(factors.size());
  for (std::size_t j = 0; j < joint.size(); ++j) {
    joint[j] = std::log(params.components[j].pi) + terms.log_fx[j] + terms.log_fy[j];
  }
  return log_sum_exp(joint);
}

double marginal_x_log_density(const Vector& x, const CwmParams& params) {
  if (x.size() != params.d_x) throw Error(ErrorCode::DimensionMismatch, "x dimension");
  std::vector<double> terms;
  terms.reserve(params.components.size());
  for (const auto& c : params.components) {
    const CovFactor f = factor_covariance(c.x_block.sigma);
    terms.push_back(std::log(c.pi) +
                    log_contaminated_pdf(x, c.x_block.mu, f, c.x_block.alpha, c.x_block.eta));
  }
  return log_sum_exp(terms);
}

double conditional_y_log_density(const Vector& y, const Vector& x, const CwmParams& params) {
  const auto factors = factorize(params);
  const auto terms = component_log_terms(x, y, params, factors);
  const std::size_t k = factors.size();
  // log tau_j(x) = log pi_j + log f_X(x; j) - log sum_h pi_h f_X(x; h)
  std::vector<double> weighted_x(k);
  for (std::size_t j = 0; j < k; ++j) {
    weighted_x[j] = std::log(params.components[j].pi) + terms.log_fx[j];
  }
  const double norm = log_sum_exp(weighted_x);
  std::vector<double> mix(k);
  for (std::size_t j = 0; j < k; ++j) mix[j] = weighted_x[j] - norm + terms.log_fy[j];
  return log_sum_exp(mix);
}

int count_free_parameters(int k, int d_x, int d_y, Family family) {
  const int per_component = d_x + d_x * (d_x + 1) / 2 + (1 + d_x) * d_y + d_y * (d_y + 1) / 2 +
                            (family == Family::Contaminated ? 4 : 0);
  return (k - 1) + k * per_component;
}

int count_free_parameters(const CwmParams& params, Family family) {
  return count_free_parameters(params.k(), params.d_x, params.d_y, family);
}

std::vector<LabeledSample> sample_dataset(const CwmParams& params, int n, std::mt19937_64& rng) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be >= 1");
  params.validate();
  const auto factors = factorize(params);
  std::vector<double> weights;
  for (const auto& c : params.components) weights.push_back(c.pi);
  std::discrete_distribution<int> pick(weights.begin(), weights.end());
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  auto draw = [&](const Vector& mu, const CovFactor& f, double alpha, double eta, bool& typical) {
    typical = unif(rng) < alpha;
    Vector z(mu.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = normal(rng);
    const double scale = typical ? 1.0 : std::sqrt(eta);
    return Vector(mu + scale * (f.lower() * z));
  };

  std::vector<LabeledSample> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const int j = pick(rng);
    const auto& c = params.components[static_cast<std::size_t>(j)];
    LabeledSample s;
    s.component = j + 1;
    s.x = draw(c.x_block.mu, factors[static_cast<std::size_t>(j)].x, c.x_block.alpha,
               c.x_block.eta, s.x_typical);
    s.y = draw(regression_mean(c.y_block.beta, s.x), factors[static_cast<std::size_t>(j)].y,
               c.y_block.alpha_y, c.y_block.eta_y, s.y_typical);
    out.push_back(std::move(s));
  }
  return out;
}

Matrix to_data_matrix(const std::vector<LabeledSample>& samples) {
  if (samples.empty()) return Matrix(0, 0);
  const Eigen::Index dx = samples.front().x.size();
  const Eigen::Index dy = samples.front().y.size();
  Matrix data(static_cast<Eigen::Index>(samples.size()), dx + dy);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    data.block(row, 0, 1, dx) = samples[i].x.transpose();
    data.block(row, dx, 1, dy) = samples[i].y.transpose();
  }
  return data;
}

}  // namespace cwm
