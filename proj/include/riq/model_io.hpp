#pragma once

#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "riq/model.hpp"

namespace riq {

/// Config errors carry the offending field name so callers can report
/// actionable messages (and map them onto the usage exit code).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

inline nlohmann::json matrix_to_json(const ComplexMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < m.cols(); ++j)
      row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

inline ComplexMatrix matrix_from_json(const nlohmann::json& j, const std::string& field) {
  if (!j.is_array() || j.empty())
    throw ConfigError("config: field '" + field + "' must be a non-empty array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = j.at(0).is_array() ? j.at(0).size() : 0;
  if (cols == 0)
    throw ConfigError("config: field '" + field + "' rows must be non-empty arrays");
  ComplexMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const auto& row = j.at(i);
    if (!row.is_array() || row.size() != cols)
      throw ConfigError("config: field '" + field + "' row " + std::to_string(i) +
                        " has inconsistent length");
    for (std::size_t c = 0; c < cols; ++c) {
      const auto& e = row.at(c);
      if (!e.is_array() || e.size() != 2 || !e.at(0).is_number() || !e.at(1).is_number())
        throw ConfigError("config: field '" + field + "' entry (" + std::to_string(i) + "," +
                          std::to_string(c) + ") must be a [re, im] pair");
      m(i, c) = cplx(e.at(0).get<double>(), e.at(1).get<double>());
    }
  }
  return m;
}

inline double beta_from_json(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf" || s == "+inf" || s == "Infinity")
      return std::numeric_limits<double>::infinity();
    throw ConfigError("config: field 'beta' string must be \"inf\" (got \"" + s + "\")");
  }
  throw ConfigError("config: field 'beta' must be a number or \"inf\"");
}

inline nlohmann::json model_to_json(const InteractionModel& m) {
  nlohmann::json j;
  j["d"] = m.d;
  j["n"] = m.n;
  j["h0"] = matrix_to_json(m.h0);
  j["delta"] = m.delta;
  nlohmann::json vs = nlohmann::json::array();
  for (const auto& v : m.V) vs.push_back(matrix_to_json(v));
  j["V"] = vs;
  if (std::isinf(m.beta))
    j["beta"] = "inf";
  else
    j["beta"] = m.beta;
  return j;
}

inline InteractionModel model_from_json(const nlohmann::json& j) {
  InteractionModel m;
  if (!j.is_object()) throw ConfigError("config: top level must be a JSON object");
  for (const char* req : {"d", "n", "h0", "delta", "V", "beta"})
    if (!j.contains(req))
      throw ConfigError(std::string("config: missing field '") + req + "'");
  if (!j.at("d").is_number_integer())
    throw ConfigError("config: field 'd' must be an integer");
  if (!j.at("n").is_number_integer())
    throw ConfigError("config: field 'n' must be an integer");
  m.d = j.at("d").get<int>();
  m.n = j.at("n").get<int>();
  m.h0 = matrix_from_json(j.at("h0"), "h0");
  if (!j.at("delta").is_array())
    throw ConfigError("config: field 'delta' must be an array of numbers");
  for (const auto& e : j.at("delta")) {
    if (!e.is_number()) throw ConfigError("config: field 'delta' must contain numbers");
    m.delta.push_back(e.get<double>());
  }
  if (!j.at("V").is_array())
    throw ConfigError("config: field 'V' must be an array of matrices");
  std::size_t idx = 0;
  for (const auto& v : j.at("V"))
    m.V.push_back(matrix_from_json(v, "V[" + std::to_string(idx++) + "]"));
  m.beta = beta_from_json(j.at("beta"));
  try {
    m.check();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return m;
}

inline InteractionModel load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config: '" + path + "' is not valid JSON: " + e.what());
  }
  return model_from_json(j);
}

}  // namespace riq
