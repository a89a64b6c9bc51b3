#include "cwm/simulate.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <sstream>

#include "cwm/csv.hpp"
#include "cwm/model_json.hpp"
#include "cwm/parallel.hpp"

namespace cwm {

std::string_view scenario_name(Scenario s) { return s == Scenario::A ? "A" : "B"; }

Scenario parse_scenario(std::string_view name) {
  if (name == "A" || name == "a") return Scenario::A;
  if (name == "B" || name == "b") return Scenario::B;
  throw Error(ErrorCode::InvalidArgument, "unknown scenario '" + std::string(name) + "'");
}

CwmParams scenario_params(Scenario s) {
  CwmParams p;
  p.d_x = 2;
  p.d_y = 2;
  const double pis[2] = {0.3, 0.7};
  const double mus[2] = {-5.0, 5.0};
  Matrix beta1(3, 2), beta2(3, 2);
  beta1 << -2, -2, -1, 1, 1, -1;
  beta2 << 2, 2, 1, -1, -1, 1;
  const double alpha = s == Scenario::B ? 0.95 : 1.0;
  const double eta = s == Scenario::B ? 100.0 : 1.0;
  for (int j = 0; j < 2; ++j) {
    ComponentParams c;
    c.pi = pis[j];
    c.x_block.mu = Vector::Constant(2, mus[j]);
    c.x_block.sigma = Matrix::Identity(2, 2);
    c.x_block.alpha = alpha;
    c.x_block.eta = eta;
    c.y_block.beta = j == 0 ? beta1 : beta2;
    c.y_block.sigma_y = 0.4 * Matrix::Identity(2, 2);
    c.y_block.alpha_y = alpha;
    c.y_block.eta_y = eta;
    p.components.push_back(std::move(c));
  }
  return p;
}

std::vector<LabeledSample> simulate_scenario(Scenario s, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return sample_dataset(scenario_params(s), n, rng);
}

std::vector<int> match_labels(const CwmParams& estimated, const CwmParams& truth) {
  if (estimated.k() != truth.k() || estimated.d_x != truth.d_x) {
    throw Error(ErrorCode::DimensionMismatch, "match_labels: parameter shapes differ");
  }
  const int k = truth.k();
  if (k > 6) throw Error(ErrorCode::KTooLarge, "match_labels supports k <= 6");
  Matrix cost(k, k);
  for (int j = 0; j < k; ++j) {
    for (int e = 0; e < k; ++e) {
      cost(j, e) =
          (estimated.components[e].x_block.mu - truth.components[j].x_block.mu).squaredNorm();
    }
  }
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> best = perm;
  double best_cost = std::numeric_limits<double>::infinity();
  do {
    double c = 0.0;
    for (int j = 0; j < k; ++j) c += cost(j, perm[j]);
    if (c < best_cost) {
      best_cost = c;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

const FamilyReport& MonteCarloReport::family(Family f) const {
  for (const auto& r : families) {
    if (r.family == f) return r;
  }
  throw Error(ErrorCode::InvalidArgument, "family not in report");
}

namespace {

struct ReplicationFit {
  bool ok = false;
  std::vector<Matrix> beta;  // matched to the true components
  std::vector<double> eta_x;
  std::vector<double> eta_y;
};

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

MonteCarloReport run_monte_carlo(const ScenarioSpec& spec) {
  if (spec.replications < 10) throw Error(ErrorCode::InvalidArgument, "replications must be >= 10");
  if (spec.n < 1) throw Error(ErrorCode::InvalidArgument, "n must be >= 1");
  const CwmParams truth = scenario_params(spec.scenario);
  const Family families[2] = {Family::Gaussian, Family::Contaminated};
  const int k = truth.k();
  const auto reps = static_cast<std::size_t>(spec.replications);

  std::vector<ReplicationFit> results(2 * reps);
  parallel_for(reps, [&](std::size_t r) {
    const std::uint64_t rep_seed = derive_seed(spec.seed, r);
    const auto samples = simulate_scenario(spec.scenario, spec.n, rep_seed);
    const Dataset data(to_data_matrix(samples), truth.d_x, truth.d_y);
    for (int f = 0; f < 2; ++f) {
      FitConfig cfg = spec.fit_config;
      cfg.k = k;
      cfg.family = families[f];
      cfg.seed = derive_seed(rep_seed, 1);
      ReplicationFit& out = results[2 * r + static_cast<std::size_t>(f)];
      try {
        const FitResult fitted = fit(data, cfg);
        const auto perm = match_labels(fitted.params, truth);
        for (int j = 0; j < k; ++j) {
          const auto& c = fitted.params.components[static_cast<std::size_t>(perm[j])];
          out.beta.push_back(c.y_block.beta);
          out.eta_x.push_back(c.x_block.eta);
          out.eta_y.push_back(c.y_block.eta_y);
        }
        out.ok = true;
      } catch (const Error&) {
        out.ok = false;
      }
    }
  });

  MonteCarloReport report;
  report.scenario = spec.scenario;
  report.n = spec.n;
  report.replications = spec.replications;
  report.seed = spec.seed;
  for (int f = 0; f < 2; ++f) {
    FamilyReport fr;
    fr.family = families[f];
    for (int j = 0; j < k; ++j) {
      const Matrix& b = truth.components[j].y_block.beta;
      fr.bias.push_back(Matrix::Zero(b.rows(), b.cols()));
      fr.mse.push_back(Matrix::Zero(b.rows(), b.cols()));
    }
    std::vector<std::vector<double>> eta_x(k), eta_y(k);
    for (std::size_t r = 0; r < reps; ++r) {
      const ReplicationFit& rf = results[2 * r + static_cast<std::size_t>(f)];
      if (!rf.ok) {
        ++fr.failures;
        continue;
      }
      ++fr.successes;
      for (int j = 0; j < k; ++j) {
        const Matrix err = rf.beta[j] - truth.components[j].y_block.beta;
        fr.bias[j] += err;
        fr.mse[j] += err.cwiseAbs2();
        eta_x[j].push_back(rf.eta_x[j]);
        eta_y[j].push_back(rf.eta_y[j]);
      }
    }
    for (int j = 0; j < k; ++j) {
      if (fr.successes > 0) {
        fr.bias[j] /= fr.successes;
        fr.mse[j] /= fr.successes;
      } else {
        fr.bias[j].setConstant(std::numeric_limits<double>::quiet_NaN());
        fr.mse[j].setConstant(std::numeric_limits<double>::quiet_NaN());
      }
      fr.median_eta_x.push_back(median(eta_x[j]));
      fr.median_eta_y.push_back(median(eta_y[j]));
    }
    report.families.push_back(std::move(fr));
  }
  return report;
}

std::string report_csv(const MonteCarloReport& report) {
  std::ostringstream out;
  out << "scenario,n,family,component,coefficient,response,bias,mse\n";
  for (const auto& fr : report.families) {
    for (std::size_t j = 0; j < fr.bias.size(); ++j) {
      for (Eigen::Index c = 0; c < fr.bias[j].rows(); ++c) {
        for (Eigen::Index r = 0; r < fr.bias[j].cols(); ++r) {
          out << scenario_name(report.scenario) << ',' << report.n << ','
              << family_name(fr.family) << ',' << j + 1 << ",beta" << c << ",y" << r + 1 << ','
              << format_double(fr.bias[j](c, r)) << ',' << format_double(fr.mse[j](c, r))
              << '\n';
        }
      }
    }
  }
  return out.str();
}

nlohmann::json report_json(const MonteCarloReport& report) {
  nlohmann::json j;
  j["scenario"] = std::string(scenario_name(report.scenario));
  j["n"] = report.n;
  j["replications"] = report.replications;
  j["seed"] = report.seed;
  j["families"] = nlohmann::json::array();
  for (const auto& fr : report.families) {
    nlohmann::json f;
    f["family"] = std::string(family_name(fr.family));
    f["successes"] = fr.successes;
    f["failures"] = fr.failures;
    f["components"] = nlohmann::json::array();
    for (std::size_t c = 0; c < fr.bias.size(); ++c) {
      f["components"].push_back({{"bias", matrix_to_json(fr.bias[c])},
                                 {"mse", matrix_to_json(fr.mse[c])},
                                 {"median_eta_x", fr.median_eta_x[c]},
                                 {"median_eta_y", fr.median_eta_y[c]}});
    }
    j["families"].push_back(std::move(f));
  }
  return j;
}

Dataset perturb_with_point(const Dataset& data, const Vector& x, const Vector& y) {
  if (x.size() != data.d_x() || y.size() != data.d_y()) {
    throw Error(ErrorCode::DimensionMismatch, "appended point has the wrong dimensions");
  }
  Matrix m(data.n() + 1, data.values().cols());
  m.topRows(data.n()) = data.values();
  m.row(data.n()) << x.transpose(), y.transpose();
  return Dataset(std::move(m), data.d_x(), data.d_y());
}

NoisyDataset perturb_with_uniform_noise(const Dataset& data, int count, double side,
                                        std::mt19937_64& rng) {
  if (count < 0) throw Error(ErrorCode::InvalidArgument, "count must be >= 0");
  if (!(side > 0.0)) throw Error(ErrorCode::InvalidArgument, "side must be positive");
  const Eigen::Index n = data.n();
  const Eigen::Index d = data.values().cols();
  const Vector center = data.values().colwise().mean().transpose();
  Matrix m(n + count, d);
  m.topRows(n) = data.values();
  std::uniform_real_distribution<double> unit(-0.5, 0.5);
  NoisyDataset out;
  for (Eigen::Index i = 0; i < count; ++i) {
    for (Eigen::Index c = 0; c < d; ++c) m(n + i, c) = center(c) + side * unit(rng);
    out.noise_indices.push_back(n + i);
  }
  out.data = Dataset(std::move(m), data.d_x(), data.d_y());
  return out;
}

}  // namespace cwm
