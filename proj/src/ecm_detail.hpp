#pragma once

// Update kernels shared by the ECM fit and the Gaussian CWM EM. Internal header.

#include "cwm/ecm.hpp"

namespace cwm::detail {

// Squared distances, n x k: X from mu_X|j, and Y from its regression mean.
struct BlockDistances {
  Matrix x;
  Matrix y;
};

BlockDistances block_distances(const Dataset& data, const CwmParams& params,
                               const std::vector<ComponentFactors>& factors);

// CM-step 1. With `gaussian` set, alpha and eta stay at 1 and the weights are z
// alone, which is the Gaussian CWM M-step.
CwmParams conditional_max_step1(const Dataset& data, const Responsibilities& resp,
                                const CwmParams& prev, const FitConfig& config, bool gaussian);

}  // namespace cwm::detail
