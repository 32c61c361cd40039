#pragma once

#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "envwit/sparse/reducer.hpp"

namespace envwit {

inline constexpr int kJsonSchemaVersion = 1;

struct ReductionReport {
  int iterations = 0;
  std::map<int, int> block_size_histogram;
  std::int64_t original_variables = 0;
  std::int64_t kept_variables = 0;
  std::int64_t original_constraints = 0;  // before Hermitian de-duplication
  std::int64_t kept_constraints = 0;      // same counting as original_constraints
  std::int64_t kept_equalities = 0;       // rows handed to the solver
  std::int64_t discarded_constraints = 0;  // same counting as original_constraints
  bool exact = false;
};

template <class Scalar>
ReductionReport make_report(const ReductionResult<Scalar>& r) {
  ReductionReport rep;
  rep.iterations = r.iterations;
  rep.block_size_histogram = r.block_size_histogram();
  rep.original_variables = r.original_variables;
  rep.kept_variables = r.kept_variables;
  rep.original_constraints = r.original_raw_constraints;
  rep.kept_constraints = r.kept_raw_constraints;
  rep.kept_equalities = static_cast<std::int64_t>(r.kept_constraints.size());
  rep.discarded_constraints = r.original_raw_constraints - r.kept_raw_constraints;
  rep.exact = r.exact;
  return rep;
}

inline nlohmann::json to_json(const ReductionReport& r) {
  nlohmann::json hist = nlohmann::json::object();
  for (const auto& [size, count] : r.block_size_histogram) hist[std::to_string(size)] = count;
  return {{"iterations", r.iterations},
          {"block_size_histogram", hist},
          {"original_variables", r.original_variables},
          {"kept_variables", r.kept_variables},
          {"original_constraints", r.original_constraints},
          {"kept_constraints", r.kept_constraints},
          {"kept_equalities", r.kept_equalities},
          {"discarded_constraints", r.discarded_constraints},
          {"exact", r.exact}};
}

inline nlohmann::json finite_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

inline nlohmann::json to_json(const BoundResult& r) {
  return {{"schema_version", kJsonSchemaVersion},
          {"value", finite_or_null(r.value)},
          {"safe_value", finite_or_null(r.safe_value)},
          {"dual_value", finite_or_null(r.dual_value)},
          {"certified_value", finite_or_null(r.certified_value)},
          {"N", r.N},
          {"ppt", r.ppt},
          {"status", to_string(r.status)},
          {"residuals", {{"primal", r.primal_residual}, {"dual", r.dual_residual}, {"gap", r.gap}}},
          {"iterations", r.iterations},
          {"wall_time_s", r.wall_time_s},
          {"solver", r.solver}};
}

inline SolverStatus status_from_string(const std::string& s) {
  for (SolverStatus st : {SolverStatus::optimal, SolverStatus::near_optimal, SolverStatus::infeasible, SolverStatus::unbounded,
                          SolverStatus::timeout, SolverStatus::numerical_error})
    if (s == to_string(st)) return st;
  throw IoError("unknown solver status '" + s + "'");
}

inline double number_or_nan(const nlohmann::json& j) {
  return j.is_number() ? j.get<double>() : std::numeric_limits<double>::quiet_NaN();
}

inline BoundResult bound_from_json(const nlohmann::json& j) {
  if (j.value("schema_version", 0) != kJsonSchemaVersion) throw IoError("unsupported bound schema version");
  BoundResult r;
  try {
    r.value = number_or_nan(j.at("value"));
    r.safe_value = number_or_nan(j.at("safe_value"));
    r.dual_value = number_or_nan(j.at("dual_value"));
    r.certified_value = number_or_nan(j.at("certified_value"));
    r.N = j.at("N").get<int>();
    r.ppt = j.at("ppt").get<bool>();
    r.status = status_from_string(j.at("status").get<std::string>());
    r.primal_residual = j.at("residuals").at("primal").get<double>();
    r.dual_residual = j.at("residuals").at("dual").get<double>();
    r.gap = j.at("residuals").at("gap").get<double>();
    r.iterations = j.at("iterations").get<int>();
    r.wall_time_s = j.at("wall_time_s").get<double>();
    r.solver = j.at("solver").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed bound record: ") + e.what());
  }
  return r;
}

// Bound results keyed by a caller-built string; optionally mirrored to a JSON file.
class BoundCache {
public:
  BoundCache() = default;
  explicit BoundCache(std::string path) : path_(std::move(path)) {
    std::ifstream in(path_);
    if (!in) return;
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception&) {
      throw IoError("cache file " + path_ + " is not valid JSON");
    }
    for (auto it = j.begin(); it != j.end(); ++it) entries_[it.key()] = bound_from_json(it.value());
  }

  std::optional<BoundResult> find(const std::string& key) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  void store(const std::string& key, const BoundResult& r) {
    std::lock_guard<std::mutex> lock(mu_);
    entries_[key] = r;
    if (path_.empty()) return;
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [k, v] : entries_) j[k] = to_json(v);
    std::ofstream out(path_);
    if (!out) throw IoError("cannot write cache file " + path_);
    out << j.dump(2) << "\n";
  }

  std::size_t size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return entries_.size();
  }

private:
  std::string path_;
  std::map<std::string, BoundResult> entries_;
  mutable std::mutex mu_;
};

}  // namespace envwit
