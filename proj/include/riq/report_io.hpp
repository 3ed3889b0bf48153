#pragma once

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "riq/complex_matrix.hpp"
#include "riq/regimes.hpp"
#include "riq/superoperator.hpp"
#include "riq/version.hpp"

namespace riq {

/// Shortest-exact decimal for a double (printf %.17g round-trips; trim via
/// retry at lower precision to keep files tidy and byte-stable).
inline std::string format_double(double x) {
  char buf[64];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    double back = 0.0;
    std::sscanf(buf, "%lf", &back);
    if (back == x || (std::isnan(back) && std::isnan(x))) return buf;
  }
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string file_header_comment() {
  return std::string("# ") + kVersion + " | " + kVecConvention;
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
}

/// CSV with one row per convergence point; fixed column set, header comment
/// carrying version and vectorization convention.
inline std::string convergence_csv(const ConvergenceReport& rep) {
  std::string s = file_header_comment() + "\n";
  s += "regime,t,tau,lambda,k,error_schrodinger,error_heisenberg\n";
  for (const auto& p : rep.points) {
    s += rep.regime + "," + format_double(p.t) + "," + format_double(p.tau) + "," +
         format_double(p.lambda) + "," + std::to_string(p.k) + "," +
         format_double(p.errorSchrodinger) + "," + format_double(p.errorHeisenberg) + "\n";
  }
  return s;
}

inline nlohmann::json convergence_summary_json(const ConvergenceReport& rep) {
  nlohmann::json j;
  j["version"] = kVersion;
  j["convention"] = kVecConvention;
  j["regime"] = rep.regime;
  j["t"] = rep.t;
  j["theoretical_order"] = rep.theoreticalOrder;
  if (rep.exact || std::isnan(rep.fittedOrder))
    j["fitted_order"] = nullptr;
  else
    j["fitted_order"] = rep.fittedOrder;
  if (!std::isnan(rep.fittedOrderSchrodinger))
    j["fitted_order_schrodinger"] = rep.fittedOrderSchrodinger;
  if (!std::isnan(rep.fittedOrderHeisenberg))
    j["fitted_order_heisenberg"] = rep.fittedOrderHeisenberg;
  j["exact"] = rep.exact;
  j["pass"] = rep.pass;
  j["notes"] = rep.notes;
  return j;
}

/// One generator as JSON: matrix entries as [re, im] pairs plus metadata.
/// `extra` lets callers attach cross-check residuals and warnings.
inline nlohmann::json generator_json(const std::string& name, const ComplexMatrix& matrix,
                                     double tau, double beta,
                                     const std::vector<std::string>& warnings,
                                     const nlohmann::json& extra = nlohmann::json::object()) {
  nlohmann::json j;
  j["version"] = kVersion;
  j["convention"] = kVecConvention;
  j["name"] = name;
  j["rows"] = matrix.rows();
  j["cols"] = matrix.cols();
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < matrix.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t c = 0; c < matrix.cols(); ++c)
      row.push_back({matrix(i, c).real(), matrix(i, c).imag()});
    rows.push_back(std::move(row));
  }
  j["matrix"] = rows;
  j["tau"] = tau;
  if (std::isinf(beta))
    j["beta"] = "inf";
  else
    j["beta"] = beta;
  j["warnings"] = warnings;
  for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
  return j;
}

inline void write_json_file(const std::string& path, const nlohmann::json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

}  // namespace riq
