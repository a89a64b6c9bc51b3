#include "cwm/selection.hpp"

#include <cmath>
#include <sstream>

#include "cwm/csv.hpp"
#include "cwm/model_json.hpp"
#include "cwm/parallel.hpp"

namespace cwm {

double bic(double loglik, int m, Eigen::Index n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be >= 1");
  return 2.0 * loglik - m * std::log(static_cast<double>(n));
}

SelectionResult select_k(const Dataset& data, const std::vector<int>& k_values,
                         const FitConfig& config, const std::vector<Family>& families) {
  struct Task {
    Family family;
    int k;
  };
  std::vector<Task> tasks;
  for (Family f : families) {
    for (int k : k_values) {
      if (k < 1) throw Error(ErrorCode::InvalidArgument, "k values must be >= 1");
      tasks.push_back({f, k});
    }
  }

  std::vector<SelectionEntry> entries(tasks.size());
  std::vector<std::optional<FitResult>> fits(tasks.size());
  parallel_for(tasks.size(), [&](std::size_t t) {
    FitConfig cfg = config;
    cfg.k = tasks[t].k;
    cfg.family = tasks[t].family;
    SelectionEntry& e = entries[t];
    e.family = cfg.family;
    e.k = cfg.k;
    e.m = count_free_parameters(cfg.k, data.d_x(), data.d_y(), cfg.family);
    try {
      FitResult r = fit(data, cfg);
      e.loglik = r.loglik();
      e.bic = bic(e.loglik, e.m, data.n());
      e.converged = r.converged;
      fits[t] = std::move(r);
    } catch (const Error& err) {
      e.failed = true;
      e.error = err.what();
    }
  });

  SelectionResult out;
  out.table = std::move(entries);
  std::optional<std::size_t> best;
  for (std::size_t t = 0; t < out.table.size(); ++t) {
    if (out.table[t].failed) continue;
    if (!best || out.table[t].bic > out.table[*best].bic) best = t;
  }
  if (best) {
    out.best_k = out.table[*best].k;
    out.best_family = out.table[*best].family;
    out.best_fit = std::move(fits[*best]);
  }
  return out;
}

SelectionResult select_k(const Dataset& data, const std::vector<int>& k_values,
                         const FitConfig& config, Family family) {
  return select_k(data, k_values, config, std::vector<Family>{family});
}

std::string selection_csv(const SelectionResult& result) {
  std::ostringstream out;
  out << "family,k,loglik,m,bic,converged\n";
  for (const auto& e : result.table) {
    out << family_name(e.family) << ',' << e.k << ',';
    if (e.failed) {
      out << "NA," << e.m << ",NA,false\n";
    } else {
      out << format_double(e.loglik) << ',' << e.m << ',' << format_double(e.bic) << ','
          << (e.converged ? "true" : "false") << '\n';
    }
  }
  return out.str();
}

nlohmann::json selection_json(const SelectionResult& result) {
  nlohmann::json table = nlohmann::json::array();
  for (const auto& e : result.table) {
    nlohmann::json row;
    row["family"] = std::string(family_name(e.family));
    row["k"] = e.k;
    row["m"] = e.m;
    row["failed"] = e.failed;
    if (e.failed) {
      row["error"] = e.error;
    } else {
      row["loglik"] = e.loglik;
      row["bic"] = e.bic;
      row["converged"] = e.converged;
    }
    table.push_back(std::move(row));
  }
  nlohmann::json out;
  out["table"] = std::move(table);
  out["best_k"] = result.best_k;
  if (result.best_k > 0) out["best_family"] = std::string(family_name(result.best_family));
  return out;
}

}  // namespace cwm
