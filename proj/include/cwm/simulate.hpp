#pragma once

// Simulation harness: the two benchmark scenarios, bias / MSE Monte Carlo of
// the regression coefficients, label matching and data perturbations.

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cwm/dataset.hpp"
#include "cwm/ecm.hpp"

namespace cwm {

// A: data from the Gaussian CWM. B: the same parameters with alpha = 0.95 and
// eta = 100 in every block.
enum class Scenario { A, B };

std::string_view scenario_name(Scenario s);
Scenario parse_scenario(std::string_view name);

struct ScenarioSpec {
  Scenario scenario = Scenario::A;
  int n = 200;
  int replications = 100;
  std::uint64_t seed = 0;
  // k is forced to 2 and family set per fit; the rest applies to both families.
  FitConfig fit_config{};
};

CwmParams scenario_params(Scenario s);

// Samples n labelled points from scenario_params(s).
std::vector<LabeledSample> simulate_scenario(Scenario s, int n, std::uint64_t seed);

// perm[j] is the 0-based estimated component matched to true component j,
// minimizing sum_j ||mu_X(estimated, perm[j]) - mu_X(truth, j)||^2 over all
// permutations. The first permutation in lexicographic order wins ties.
std::vector<int> match_labels(const CwmParams& estimated, const CwmParams& truth);

// Entrywise statistics of beta for one fitted family; bias[j] and mse[j] are
// (1 + d_x) x d_y and refer to true component j.
struct FamilyReport {
  Family family = Family::Contaminated;
  std::vector<Matrix> bias;
  std::vector<Matrix> mse;
  int successes = 0;
  int failures = 0;
  // Replication medians of the matched eta estimates per true component.
  std::vector<double> median_eta_x;
  std::vector<double> median_eta_y;
};

struct MonteCarloReport {
  Scenario scenario = Scenario::A;
  int n = 0;
  int replications = 0;
  std::uint64_t seed = 0;
  std::vector<FamilyReport> families;  // gaussian, contaminated

  const FamilyReport& family(Family f) const;
};

// Throws InvalidArgument when replications < 10 or n < 1.
MonteCarloReport run_monte_carlo(const ScenarioSpec& spec);

// Columns: scenario,n,family,component,coefficient,response,bias,mse
std::string report_csv(const MonteCarloReport& report);
nlohmann::json report_json(const MonteCarloReport& report);

// Appends one observation; rows already present are copied unchanged.
Dataset perturb_with_point(const Dataset& data, const Vector& x, const Vector& y);

struct NoisyDataset {
  Dataset data;
  std::vector<Eigen::Index> noise_indices;
};

// Appends `count` points drawn uniformly on the hypercube of the given side
// centered at the coordinate-wise mean of the data.
NoisyDataset perturb_with_uniform_noise(const Dataset& data, int count, double side,
                                        std::mt19937_64& rng);

}  // namespace cwm
