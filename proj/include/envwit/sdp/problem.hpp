#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include "envwit/linalg.hpp"

namespace envwit {

template <class Scalar>
struct MatEntry {
  int row;
  int col;
  Scalar value;
};

template <class Scalar>
using SparseSym = std::vector<MatEntry<Scalar>>;

template <class Scalar>
struct Constraint {
  SparseSym<Scalar> matrix;
  double rhs = 0.0;
};

struct Block {
  int offset;
  int size;
};

enum class RealifyMode { none, drop_imaginary, embed };

inline const char* to_string(RealifyMode m) {
  switch (m) {
    case RealifyMode::none: return "none";
    case RealifyMode::drop_imaginary: return "drop_imaginary";
    case RealifyMode::embed: return "embed";
  }
  return "?";
}

// maximize <F, X> s.t. <C_k, X> = b_k, X = diag(B_1, ..., B_R) >= 0, with <A, B> = Tr[A^dagger B].
// Matrices are stored with both triangles; index pairs address the block-diagonal variable.
template <class Scalar>
struct SdpProblem {
  using scalar_type = Scalar;
  std::vector<Block> blocks;
  SparseSym<Scalar> objective;
  std::vector<Constraint<Scalar>> constraints;
  RealifyMode realify_mode = RealifyMode::none;
  // equality count before Hermitian de-duplication, when the builder knows it
  std::int64_t raw_constraint_count = -1;

  int dim() const {
    int n = 0;
    for (const Block& b : blocks) n = std::max(n, b.offset + b.size);
    return n;
  }

  std::vector<int> block_index() const {
    std::vector<int> id(static_cast<std::size_t>(dim()), -1);
    for (std::size_t r = 0; r < blocks.size(); ++r)
      for (int i = 0; i < blocks[r].size; ++i) id[static_cast<std::size_t>(blocks[r].offset + i)] = static_cast<int>(r);
    return id;
  }

  std::int64_t variable_count() const {
    std::int64_t n = 0;
    for (const Block& b : blocks) n += static_cast<std::int64_t>(b.size) * b.size;
    return n;
  }
};

using RealSdp = SdpProblem<double>;
using ComplexSdp = SdpProblem<cplx>;

inline double conj_value(double v) { return v; }
inline cplx conj_value(const cplx& v) { return std::conj(v); }

// <C, X> for a dense X of the full variable dimension.
template <class Scalar, class Mat>
cplx inner(const SparseSym<Scalar>& c, const Mat& x) {
  cplx s = 0.0;
  for (const auto& e : c) s += conj_value(e.value) * cplx(x(e.row, e.col));
  return s;
}

namespace detail {

template <class Scalar>
void check_matrix(const SparseSym<Scalar>& m, const std::string& name, const std::vector<int>& block_id,
                  std::vector<std::string>& out, double tol) {
  const int n = static_cast<int>(block_id.size());
  std::map<std::pair<int, int>, Scalar> acc;
  bool range_ok = true;
  for (const auto& e : m) {
    if (e.row < 0 || e.col < 0 || e.row >= n || e.col >= n) {
      out.push_back(name + ": entry (" + std::to_string(e.row) + "," + std::to_string(e.col) + ") out of range");
      range_ok = false;
      continue;
    }
    acc[{e.row, e.col}] += e.value;
  }
  if (!range_ok) return;
  for (const auto& [rc, v] : acc) {
    const int bi = block_id[static_cast<std::size_t>(rc.first)], bj = block_id[static_cast<std::size_t>(rc.second)];
    if (bi < 0 || bi != bj) {
      out.push_back(name + ": entry (" + std::to_string(rc.first) + "," + std::to_string(rc.second) +
                    ") couples distinct blocks");
      return;
    }
  }
  for (const auto& [rc, v] : acc) {
    auto it = acc.find({rc.second, rc.first});
    Scalar partner = it == acc.end() ? Scalar(0) : it->second;
    if (std::abs(v - conj_value(partner)) > tol) {
      out.push_back(name + ": not Hermitian at (" + std::to_string(rc.first) + "," + std::to_string(rc.second) + ")");
      return;
    }
  }
}

}  // namespace detail

// Empty iff the problem is well-formed.
template <class Scalar>
std::vector<std::string> validate(const SdpProblem<Scalar>& p, double tol = 1e-12) {
  std::vector<std::string> out;
  if (p.blocks.empty()) out.push_back("problem has no PSD blocks");
  int expect = 0;
  for (std::size_t r = 0; r < p.blocks.size(); ++r) {
    if (p.blocks[r].size < 1) out.push_back("block " + std::to_string(r) + " has non-positive size");
    if (p.blocks[r].offset != expect) out.push_back("block " + std::to_string(r) + " is not contiguous with its predecessor");
    expect = p.blocks[r].offset + p.blocks[r].size;
  }
  if (!out.empty()) return out;
  const std::vector<int> id = p.block_index();
  detail::check_matrix(p.objective, "objective", id, out, tol);
  for (std::size_t k = 0; k < p.constraints.size(); ++k) {
    detail::check_matrix(p.constraints[k].matrix, "constraint " + std::to_string(k), id, out, tol);
    if (!std::isfinite(p.constraints[k].rhs)) out.push_back("constraint " + std::to_string(k) + ": rhs is not finite");
  }
  return out;
}

enum class SolverStatus { optimal, near_optimal, infeasible, unbounded, timeout, numerical_error };

inline const char* to_string(SolverStatus s) {
  switch (s) {
    case SolverStatus::optimal: return "optimal";
    case SolverStatus::near_optimal: return "near_optimal";
    case SolverStatus::infeasible: return "infeasible";
    case SolverStatus::unbounded: return "unbounded";
    case SolverStatus::timeout: return "timeout";
    case SolverStatus::numerical_error: return "numerical_error";
  }
  return "?";
}

struct SolveConfig {
  int max_iters = 200000;
  double eps_abs = 1e-7;
  double eps_rel = 1e-7;
  double time_limit_s = 0.0;  // 0 means unlimited
  bool verbose = false;
  // upper bound on Tr X over the feasible set; enables the certified bound when positive
  double trace_bound = 0.0;
};

struct BoundResult {
  double value = 0.0;       // objective at the returned primal
  double safe_value = 0.0;  // value + max(gap, eps_abs)
  double dual_value = 0.0;
  // b.y plus the slack deficit of y times the trace bound; NaN when not computed
  double certified_value = std::numeric_limits<double>::quiet_NaN();
  int N = 0;
  bool ppt = false;
  SolverStatus status = SolverStatus::numerical_error;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double gap = 0.0;
  double wall_time_s = 0.0;
  int iterations = 0;
  std::string solver;

  bool has_value() const { return status == SolverStatus::optimal || status == SolverStatus::near_optimal; }
};

}  // namespace envwit
