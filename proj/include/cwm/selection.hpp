#pragma once

// BIC = 2 * loglik - m * ln(n), larger is better, and the sweep over k.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cwm/ecm.hpp"

namespace cwm {

double bic(double loglik, int m, Eigen::Index n);

struct SelectionEntry {
  Family family = Family::Contaminated;
  int k = 1;
  double loglik = 0.0;
  int m = 0;
  double bic = 0.0;
  bool converged = false;
  bool failed = false;
  std::string error;
};

struct SelectionResult {
  std::vector<SelectionEntry> table;
  int best_k = 0;  // 0 when every fit failed
  Family best_family = Family::Contaminated;
  std::optional<FitResult> best_fit;
};

// Fits every (family, k) pair with config.seed; failed fits are kept in the
// table and excluded from the argmax. The first entry wins ties.
SelectionResult select_k(const Dataset& data, const std::vector<int>& k_values,
                         const FitConfig& config, const std::vector<Family>& families);

SelectionResult select_k(const Dataset& data, const std::vector<int>& k_values,
                         const FitConfig& config, Family family);

// Columns: family,k,loglik,m,bic,converged
std::string selection_csv(const SelectionResult& result);
nlohmann::json selection_json(const SelectionResult& result);

}  // namespace cwm
