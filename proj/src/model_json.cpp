#include "cwm/model_json.hpp"

namespace cwm {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j.front().is_array()) {
    throw Error(ErrorCode::ParseError, "matrix must be a non-empty array of rows");
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j.front().size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw Error(ErrorCode::ParseError, "ragged matrix");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto& v = row[static_cast<std::size_t>(c)];
      if (!v.is_number()) throw Error(ErrorCode::ParseError, "matrix entry is not a number");
      m(r, c) = v.get<double>();
    }
  }
  return m;
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Vector vector_from_json(const json& j) {
  if (!j.is_array()) throw Error(ErrorCode::ParseError, "vector must be an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw Error(ErrorCode::ParseError, "vector entry is not a number");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

std::string_view family_name(Family family) {
  return family == Family::Gaussian ? "gaussian" : "contaminated";
}

Family parse_family(std::string_view name) {
  if (name == "gaussian") return Family::Gaussian;
  if (name == "contaminated") return Family::Contaminated;
  throw Error(ErrorCode::InvalidArgument, "unknown family '" + std::string(name) + "'");
}

json params_to_json(const CwmParams& params, Family family) {
  json comps = json::array();
  for (const auto& c : params.components) {
    json jc;
    jc["pi"] = c.pi;
    jc["mu_x"] = vector_to_json(c.x_block.mu);
    jc["sigma_x"] = matrix_to_json(c.x_block.sigma);
    jc["beta"] = matrix_to_json(c.y_block.beta);
    jc["sigma_y"] = matrix_to_json(c.y_block.sigma_y);
    if (family == Family::Contaminated) {
      jc["alpha_x"] = c.x_block.alpha;
      jc["eta_x"] = c.x_block.eta;
      jc["alpha_y"] = c.y_block.alpha_y;
      jc["eta_y"] = c.y_block.eta_y;
    }
    comps.push_back(std::move(jc));
  }
  json out;
  out["k"] = params.k();
  out["d_x"] = params.d_x;
  out["d_y"] = params.d_y;
  out["family"] = std::string(family_name(family));
  out["components"] = std::move(comps);
  return out;
}

ParsedParams params_from_json(const json& j) {
  ParsedParams out;
  try {
    out.params.d_x = j.at("d_x").get<int>();
    out.params.d_y = j.at("d_y").get<int>();
    const int k = j.at("k").get<int>();
    if (j.contains("family")) out.family = parse_family(j.at("family").get<std::string>());
    const auto& comps = j.at("components");
    if (!comps.is_array() || static_cast<int>(comps.size()) != k) {
      throw Error(ErrorCode::ParseError, "components array length differs from k");
    }
    for (const auto& jc : comps) {
      ComponentParams c;
      c.pi = jc.at("pi").get<double>();
      c.x_block.mu = vector_from_json(jc.at("mu_x"));
      c.x_block.sigma = matrix_from_json(jc.at("sigma_x"));
      c.y_block.beta = matrix_from_json(jc.at("beta"));
      c.y_block.sigma_y = matrix_from_json(jc.at("sigma_y"));
      c.x_block.alpha = jc.value("alpha_x", 1.0);
      c.x_block.eta = jc.value("eta_x", 1.0);
      c.y_block.alpha_y = jc.value("alpha_y", 1.0);
      c.y_block.eta_y = jc.value("eta_y", 1.0);
      out.params.components.push_back(std::move(c));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  out.params.validate();
  return out;
}

}  // namespace cwm
