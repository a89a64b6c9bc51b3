#include "cwm/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cwm/classify.hpp"
#include "cwm/csv.hpp"
#include "cwm/model_json.hpp"
#include "cwm/selection.hpp"
#include "cwm/simulate.hpp"

namespace cwm::cli {
namespace {

using nlohmann::json;

struct FitOptions {
  std::string family = "contaminated";
  double alpha_star = 0.5;
  double eta_star = 500.0;
  double epsilon = 1e-4;
  double w0 = 0.999;
  int max_iter = 1000;
  int restarts = 5;
  std::uint64_t seed = 0;
};

void add_fit_options(CLI::App* app, FitOptions& o, bool with_family) {
  if (with_family) {
    app->add_option("--family", o.family, "contaminated|gaussian")
        ->check(CLI::IsMember({"contaminated", "gaussian"}));
  }
  app->add_option("--alpha-star", o.alpha_star, "lower bound for alpha");
  app->add_option("--eta-star", o.eta_star, "upper bound for eta");
  app->add_option("--epsilon", o.epsilon, "Aitken tolerance");
  app->add_option("--w0", o.w0, "initial u and v");
  app->add_option("--max-iter", o.max_iter, "iteration cap");
  app->add_option("--restarts", o.restarts, "number of starts");
  app->add_option("--seed", o.seed, "random seed");
}

FitConfig to_config(const FitOptions& o) {
  FitConfig c;
  c.family = parse_family(o.family);
  c.alpha_star = o.alpha_star;
  c.eta_star = o.eta_star;
  c.epsilon = o.epsilon;
  c.w0 = o.w0;
  c.max_iter = o.max_iter;
  c.restarts = o.restarts;
  c.seed = o.seed;
  return c;
}

void write_json(const std::string& path, const json& j) { write_text_file(path, j.dump(2) + "\n"); }

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
}

json fit_to_json(const FitResult& r, Eigen::Index n) {
  json j;
  j["family"] = std::string(family_name(r.family));
  j["params"] = params_to_json(r.params, r.family);
  j["loglik"] = r.loglik();
  j["loglik_trace"] = r.loglik_trace;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["restart"] = r.restart;
  j["initial_gaussian_loglik"] = r.initial_gaussian_loglik;
  const int m = count_free_parameters(r.params, r.family);
  j["free_parameters"] = m;
  j["bic"] = bic(r.loglik(), m, n);
  return j;
}

struct Context {
  std::string data;
  std::string out;
  std::string fit_path;
  std::string scenario = "A";
  std::string select_family = "both";
  std::string truth;
  int dx = 0;
  int dy = 0;
  int k = 0;
  int k_min = 1;
  int k_max = 1;
  int n = 200;
  int reps = 100;
  FitOptions fit;
};

int cmd_fit(const Context& c) {
  const Dataset data = parse_dataset(c.data, c.dx, c.dy);
  FitConfig cfg = to_config(c.fit);
  cfg.k = c.k;
  const FitResult r = fit(data, cfg);
  write_json(c.out, fit_to_json(r, data.n()));
  return kExitOk;
}

int cmd_classify(const Context& c) {
  const json fit_json = read_json(c.fit_path);
  ParsedParams parsed;
  try {
    parsed = params_from_json(fit_json.contains("params") ? fit_json.at("params") : fit_json);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, c.fit_path + ": " + e.what());
  }
  const Dataset data = parse_dataset(c.data, parsed.params.d_x, parsed.params.d_y);
  FitResult r;
  r.params = parsed.params;
  r.family = parsed.family;
  r.resp = e_step(data, r.params);
  const auto labels = classify_dataset(data, r);
  json rows = json::array();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto& l = labels[i];
    rows.push_back({{"row", i + 1},
                    {"component", l.component},
                    {"category", std::string(category_name(l.category))},
                    {"u", l.u_star},
                    {"v", l.v_star},
                    {"z", l.z_row}});
  }
  write_json(c.out, json{{"k", r.params.k()}, {"labels", rows}});
  return kExitOk;
}

int cmd_select(const Context& c) {
  if (c.k_min < 1 || c.k_max < c.k_min) {
    throw Error(ErrorCode::InvalidArgument, "need 1 <= k-min <= k-max");
  }
  const Dataset data = parse_dataset(c.data, c.dx, c.dy);
  std::vector<int> ks;
  for (int k = c.k_min; k <= c.k_max; ++k) ks.push_back(k);
  std::vector<Family> families;
  if (c.select_family == "both") {
    families = {Family::Gaussian, Family::Contaminated};
  } else {
    families = {parse_family(c.select_family)};
  }
  const SelectionResult result = select_k(data, ks, to_config(c.fit), families);
  write_text_file(c.out, selection_csv(result));
  write_json(sibling_path(c.out, ".json"), selection_json(result));
  if (result.best_k == 0) throw Error(ErrorCode::InitializationFailure, "every fit failed");
  return kExitOk;
}

int cmd_simulate(const Context& c) {
  if (c.n < 1) throw Error(ErrorCode::InvalidArgument, "n must be >= 1");
  const Scenario s = parse_scenario(c.scenario);
  const auto samples = simulate_scenario(s, c.n, c.fit.seed);
  const CwmParams truth = scenario_params(s);
  const Dataset data(to_data_matrix(samples), truth.d_x, truth.d_y);
  write_text_file(c.out, dataset_csv(data));
  std::ostringstream side;
  side << "row,component,x_typical,y_typical\n";
  for (std::size_t i = 0; i < samples.size(); ++i) {
    side << i + 1 << ',' << samples[i].component << ',' << (samples[i].x_typical ? 1 : 0) << ','
         << (samples[i].y_typical ? 1 : 0) << '\n';
  }
  write_text_file(c.truth.empty() ? sibling_path(c.out, ".truth.csv") : c.truth, side.str());
  return kExitOk;
}

int cmd_benchmark(const Context& c) {
  ScenarioSpec spec;
  spec.scenario = parse_scenario(c.scenario);
  spec.n = c.n;
  spec.replications = c.reps;
  spec.seed = c.fit.seed;
  spec.fit_config = to_config(c.fit);
  const MonteCarloReport report = run_monte_carlo(spec);
  write_text_file(c.out, report_csv(report));
  write_json(sibling_path(c.out, ".json"), report_json(report));
  return kExitOk;
}

int exit_code_for(const Error& e) {
  if (e.is_data_error()) return kExitData;
  if (e.code() == ErrorCode::InvalidArgument || e.code() == ErrorCode::InvalidContamination) {
    return kExitUsage;
  }
  return kExitNumerical;
}

}  // namespace

std::string sibling_path(const std::string& path, const std::string& suffix) {
  for (const std::string ext : {".csv", ".json"}) {
    if (path.size() > ext.size() && path.compare(path.size() - ext.size(), ext.size(), ext) == 0) {
      return path.substr(0, path.size() - ext.size()) + suffix;
    }
  }
  return path + suffix;
}

int run(const std::vector<std::string>& args, std::ostream& err) {
  CLI::App app{"Contaminated Gaussian cluster-weighted models", "cwm"};
  app.require_subcommand(1);
  Context c;

  auto* fit_cmd = app.add_subcommand("fit", "fit a model and write it as JSON");
  fit_cmd->add_option("--data", c.data, "input CSV")->required();
  fit_cmd->add_option("--dx", c.dx, "number of covariates")->required()->check(CLI::PositiveNumber);
  fit_cmd->add_option("--dy", c.dy, "number of responses")->required()->check(CLI::PositiveNumber);
  fit_cmd->add_option("--k", c.k, "number of components")->required()->check(CLI::PositiveNumber);
  fit_cmd->add_option("--out", c.out, "output JSON")->required();
  add_fit_options(fit_cmd, c.fit, true);

  auto* cls_cmd = app.add_subcommand("classify", "label observations under a fitted model");
  cls_cmd->add_option("--data", c.data, "input CSV")->required();
  cls_cmd->add_option("--fit", c.fit_path, "JSON written by fit")->required();
  cls_cmd->add_option("--out", c.out, "output JSON")->required();

  auto* sel_cmd = app.add_subcommand("select-k", "BIC over a range of k");
  sel_cmd->add_option("--data", c.data, "input CSV")->required();
  sel_cmd->add_option("--dx", c.dx, "number of covariates")->required()->check(CLI::PositiveNumber);
  sel_cmd->add_option("--dy", c.dy, "number of responses")->required()->check(CLI::PositiveNumber);
  sel_cmd->add_option("--k-min", c.k_min, "smallest k")->required();
  sel_cmd->add_option("--k-max", c.k_max, "largest k")->required();
  sel_cmd->add_option("--family", c.select_family, "contaminated|gaussian|both")
      ->check(CLI::IsMember({"contaminated", "gaussian", "both"}));
  sel_cmd->add_option("--out", c.out, "output CSV (JSON written next to it)")->required();
  add_fit_options(sel_cmd, c.fit, false);

  auto* sim_cmd = app.add_subcommand("simulate", "sample a benchmark scenario");
  sim_cmd->add_option("--scenario", c.scenario, "A|B")->required()->check(CLI::IsMember({"A", "B"}));
  sim_cmd->add_option("--n", c.n, "sample size")->required();
  sim_cmd->add_option("--seed", c.fit.seed, "random seed");
  sim_cmd->add_option("--out", c.out, "output CSV")->required();
  sim_cmd->add_option("--truth", c.truth, "latent labels CSV (default: <out>.truth.csv)");

  auto* bench_cmd = app.add_subcommand("benchmark", "bias and MSE of beta over replications");
  bench_cmd->add_option("--scenario", c.scenario, "A|B")->required()->check(CLI::IsMember({"A", "B"}));
  bench_cmd->add_option("--n", c.n, "sample size")->required();
  bench_cmd->add_option("--reps", c.reps, "replications");
  bench_cmd->add_option("--out", c.out, "report CSV (JSON written next to it)")->required();
  add_fit_options(bench_cmd, c.fit, false);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    err << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    err << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (fit_cmd->parsed()) return cmd_fit(c);
    if (cls_cmd->parsed()) return cmd_classify(c);
    if (sel_cmd->parsed()) return cmd_select(c);
    if (sim_cmd->parsed()) return cmd_simulate(c);
    if (bench_cmd->parsed()) return cmd_benchmark(c);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  err << app.help();
  return kExitUsage;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cerr);
}

}  // namespace cwm::cli
