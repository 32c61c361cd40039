#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <toml.hpp>

#include "envwit/protocol.hpp"

namespace envwit {

// Matrices are nested arrays of rows, each entry a [re, im] pair.
namespace toml_detail {

inline double number(const toml::node& n, const std::string& where) {
  if (auto v = n.value<double>()) return *v;
  throw IoError(where + ": expected a number");
}

inline CMatrix read_matrix(const toml::node* node, const std::string& key) {
  const toml::array* rows = node ? node->as_array() : nullptr;
  if (!rows || rows->empty()) throw IoError("'" + key + "' must be a non-empty array of rows");
  const auto n = static_cast<Eigen::Index>(rows->size());
  CMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const toml::array* row = (*rows)[static_cast<std::size_t>(i)].as_array();
    if (!row || static_cast<Eigen::Index>(row->size()) != n) throw IoError("'" + key + "' must be square");
    for (Eigen::Index j = 0; j < n; ++j) {
      const toml::array* z = (*row)[static_cast<std::size_t>(j)].as_array();
      if (!z || z->size() != 2) throw IoError("'" + key + "' entries must be [re, im] pairs");
      m(i, j) = cplx(number((*z)[0], key), number((*z)[1], key));
    }
  }
  return m;
}

inline toml::array write_matrix(const CMatrix& m) {
  toml::array rows;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    toml::array row;
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(toml::array{m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

inline toml::table parse(const std::string& text, const std::string& origin) {
  try {
    return toml::parse(text, origin);
  } catch (const toml::parse_error& e) {
    throw IoError(origin + ": " + std::string(e.description()));
  }
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline int integer(const toml::table& t, const char* key) {
  auto v = t[key].value<std::int64_t>();
  if (!v) throw IoError(std::string("missing integer '") + key + "'");
  return static_cast<int>(*v);
}

}  // namespace toml_detail

inline MeasurementProtocol protocol_from_toml(const std::string& text, const std::string& origin = "protocol") {
  const toml::table t = toml_detail::parse(text, origin);
  const int dS = toml_detail::integer(t, "d_S");
  const int dE = toml_detail::integer(t, "d_E");
  const toml::array* povm = t["povm"].as_array();
  if (!povm) throw IoError("missing 'povm' array");
  std::vector<CMatrix> effects;
  for (std::size_t a = 0; a < povm->size(); ++a) effects.push_back(toml_detail::read_matrix(&(*povm)[a], "povm"));
  return MeasurementProtocol(dS, dE, toml_detail::read_matrix(t.get("rho_S0"), "rho_S0"),
                             toml_detail::read_matrix(t.get("rho_E0"), "rho_E0"), std::move(effects));
}

inline MeasurementProtocol load_protocol(const std::string& path) {
  return protocol_from_toml(toml_detail::slurp(path), path);
}

inline std::string protocol_to_toml(const MeasurementProtocol& p) {
  toml::table t;
  t.insert("d_S", p.d_S());
  t.insert("d_E", p.d_E());
  t.insert("rho_S0", toml_detail::write_matrix(p.rho_S0()));
  t.insert("rho_E0", toml_detail::write_matrix(p.rho_E0()));
  toml::array povm;
  for (const CMatrix& e : p.povm()) povm.push_back(toml_detail::write_matrix(e));
  t.insert("povm", std::move(povm));
  std::ostringstream os;
  os << t << "\n";
  return os.str();
}

// Unitary documents carry the matrix under 'unitary'; other keys are ignored.
inline CMatrix unitary_from_toml(const std::string& text, const std::string& origin = "unitary") {
  const toml::table t = toml_detail::parse(text, origin);
  CMatrix u = toml_detail::read_matrix(t.get("unitary"), "unitary");
  if (!is_unitary(u, 1e-8)) throw NonUnitaryInput(origin + ": matrix is not unitary");
  return u;
}

inline CMatrix load_unitary(const std::string& path) { return unitary_from_toml(toml_detail::slurp(path), path); }

inline std::string unitary_to_toml(const CMatrix& u, const std::string& seq = "", double value = -1.0) {
  toml::table t;
  if (!seq.empty()) t.insert("sequence", seq);
  if (value >= 0.0) t.insert("probability", value);
  t.insert("unitary", toml_detail::write_matrix(u));
  std::ostringstream os;
  os << t << "\n";
  return os.str();
}

inline void save_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << text;
}

}  // namespace envwit
