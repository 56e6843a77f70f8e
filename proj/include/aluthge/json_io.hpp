#pragma once

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "aluthge/digest.hpp"
#include "aluthge/radii.hpp"
#include "aluthge/report.hpp"

namespace aluthge {

using Json = nlohmann::ordered_json;

// Doubles are written by the JSON library's shortest round-trip formatter, so
// every finite value reads back bit-identical. NaN/inf become null.

inline Json to_json(const ComplexMatrix& m) {
  Json entries = Json::array();
  for (const Complex& z : m.row_major()) entries.push_back(Json::array({z.real(), z.imag()}));
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

inline ComplexMatrix matrix_from_json(const Json& j) {
  try {
    if (!j.is_object()) throw InvalidInput("matrix JSON must be an object");
    const auto rows = j.at("rows").get<long long>();
    const auto cols = j.at("cols").get<long long>();
    if (rows <= 0 || cols <= 0) throw InvalidInput("matrix JSON: rows and cols must be positive");
    const Json& e = j.at("entries");
    if (!e.is_array() || static_cast<long long>(e.size()) != rows * cols)
      throw InvalidInput("matrix JSON: entries must hold rows*cols [re, im] pairs");
    std::vector<Complex> values;
    values.reserve(e.size());
    for (const Json& z : e) {
      if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number())
        throw InvalidInput("matrix JSON: each entry must be [re, im]");
      values.emplace_back(z[0].get<double>(), z[1].get<double>());
    }
    return ComplexMatrix::from_row_major(rows, cols, values);
  } catch (const Json::exception& ex) {
    throw InvalidInput(std::string("matrix JSON: ") + ex.what());
  }
}

/// Canonical serialization used for digests.
inline std::string canonical_matrix(const ComplexMatrix& m) { return to_json(m).dump(); }

inline std::string matrix_digest(const ComplexMatrix& m) { return sha256_hex(canonical_matrix(m)); }

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& ex) {
    throw InvalidInput("'" + path + "': " + ex.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

inline ComplexMatrix read_matrix_file(const std::string& path) { return matrix_from_json(read_json_file(path)); }

inline Json to_json(const Params& p) {
  Json j = Json::object();
  if (p.t) j["t"] = *p.t;
  if (p.r) j["r"] = *p.r;
  if (p.pair) j["pair"] = p.pair->label;
  if (p.gauge) j["gauge"] = p.gauge->label;
  if (p.side) j["side"] = *p.side;
  if (p.n) j["n"] = *p.n;
  return j;
}

inline Params params_from_json(const Json& j) {
  Params p;
  if (j.contains("t")) p.t = j.at("t").get<double>();
  if (j.contains("r")) p.r = j.at("r").get<double>();
  if (j.contains("pair")) p.pair = parse_pair(j.at("pair").get<std::string>());
  if (j.contains("gauge")) p.gauge = parse_gauge(j.at("gauge").get<std::string>());
  if (j.contains("side")) p.side = j.at("side").get<std::string>();
  if (j.contains("n")) p.n = j.at("n").get<int>();
  return p;
}

inline Json to_json(const Operands& ops) {
  Json j = Json::object();
  for (const auto& [role, m] : ops) j[role] = to_json(m);
  return j;
}

inline Operands operands_from_json(const Json& j) {
  Operands ops;
  for (const auto& [role, m] : j.items()) ops.emplace(role, matrix_from_json(m));
  return ops;
}

inline Json to_json(const InequalityReport& r) {
  Json j{{"id", r.id},
         {"variant", to_string(r.variant)},
         {"params", to_json(r.params)},
         {"lhs", r.lhs},
         {"rhs", r.rhs},
         {"slack", r.slack},
         {"tolerance", r.tolerance},
         {"passed", r.passed()},
         {"skipped", r.skipped()},
         {"inputs_digest", r.inputs_digest}};
  if (!r.note.empty()) j["note"] = r.note;
  if (!r.witness.empty()) {
    Json w = Json::object();
    for (const auto& [k, v] : r.witness) w[k] = v;
    j["witness"] = std::move(w);
  }
  if (!r.inputs.empty()) j["inputs"] = to_json(r.inputs);
  return j;
}

inline Json to_json(const RadiusEstimate& e) {
  return Json{{"value", e.value},
              {"theta_star", e.theta_star},
              {"lower_bound", e.lower_bound},
              {"method", to_string(e.method)},
              {"grid_points", e.grid_points}};
}

}  // namespace aluthge
