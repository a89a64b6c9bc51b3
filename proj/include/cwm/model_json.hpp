#pragma once

// JSON interchange for CwmParams:
//   {"k", "d_x", "d_y", "family",
//    "components": [{"pi", "mu_x", "sigma_x", "alpha_x", "eta_x",
//                    "beta", "sigma_y", "alpha_y", "eta_y"}]}
// Matrices are arrays of rows. The Gaussian family omits the alpha/eta fields,
// and reading a component without them yields alpha = eta = 1.

#include <json.hpp>

#include "cwm/model.hpp"

namespace cwm {

nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);
nlohmann::json vector_to_json(const Vector& v);
Vector vector_from_json(const nlohmann::json& j);

nlohmann::json params_to_json(const CwmParams& params, Family family = Family::Contaminated);

struct ParsedParams {
  CwmParams params;
  Family family = Family::Contaminated;
};

// Throws ParseError on schema violations; the result is validated.
ParsedParams params_from_json(const nlohmann::json& j);

std::string_view family_name(Family family);
Family parse_family(std::string_view name);

}  // namespace cwm
