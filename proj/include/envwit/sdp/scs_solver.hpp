#pragma once

#include <chrono>
#include <cmath>
#include <map>

extern "C" {
#include "scs.h"
}

#include "envwit/sdp/problem.hpp"

namespace envwit {

template <class Scalar>
struct SolveOutput {
  BoundResult result;
  std::vector<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> blocks;  // primal X per block
};

namespace scs_detail {

constexpr double kSqrt2 = 1.4142135623730951;

template <class Scalar>
constexpr bool is_complex = !std::is_same_v<Scalar, double>;

// Length of the cone vector for an n x n block.
template <class Scalar>
long cone_len(int n) {
  if (n == 1) return 1;
  return is_complex<Scalar> ? static_cast<long>(n) * n : static_cast<long>(n) * (n + 1) / 2;
}

// Append (row, value) pairs for lower-triangle entry (i >= j) of a block of size n starting at row base.
template <class Scalar>
void scatter(long base, int n, int i, int j, Scalar v, std::map<long, double>& out) {
  if (n == 1) {
    out[base] += std::real(v);
    return;
  }
  if constexpr (is_complex<Scalar>) {
    const long col = static_cast<long>(j) * (2L * n - j);
    if (i == j) {
      out[base + col] += std::real(v);
    } else {
      const long at = base + col + 1 + 2L * (i - j - 1);
      out[at] += kSqrt2 * std::real(v);
      out[at + 1] += kSqrt2 * std::imag(v);
    }
  } else {
    const long at = base + static_cast<long>(j) * n - static_cast<long>(j) * (j - 1) / 2 + (i - j);
    out[at] += i == j ? v : kSqrt2 * v;
  }
}

inline SolverStatus map_status(scs_int v) {
  switch (v) {
    case SCS_SOLVED: return SolverStatus::optimal;
    case SCS_SOLVED_INACCURATE: return SolverStatus::near_optimal;
    // SCS solves the dual; its infeasibility is our unboundedness and vice versa
    case SCS_INFEASIBLE:
    case SCS_INFEASIBLE_INACCURATE: return SolverStatus::unbounded;
    case SCS_UNBOUNDED:
    case SCS_UNBOUNDED_INACCURATE: return SolverStatus::infeasible;
    case SCS_SIGINT: return SolverStatus::timeout;
    default: return SolverStatus::numerical_error;
  }
}

// For any multipliers y and feasible X with Tr X <= T:
// <F, X> = b.y - <S, X> <= b.y + T max(0, -lambda_min(S)),  S = sum_k y_k C_k - F.
template <class Scalar>
double certified_bound(const SdpProblem<Scalar>& p, const std::vector<scs_float>& y, double trace_bound) {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const std::vector<int> bid = p.block_index();
  std::vector<Mat> S;
  for (const Block& b : p.blocks) S.push_back(Mat::Zero(b.size, b.size));
  auto add = [&](const SparseSym<Scalar>& m, double w) {
    for (const auto& e : m) {
      const int r = bid[static_cast<std::size_t>(e.row)];
      const int off = p.blocks[static_cast<std::size_t>(r)].offset;
      S[static_cast<std::size_t>(r)](e.row - off, e.col - off) += w * e.value;
    }
  };
  double by = 0.0;
  for (std::size_t k = 0; k < p.constraints.size(); ++k) {
    add(p.constraints[k].matrix, y[k]);
    by += y[k] * p.constraints[k].rhs;
  }
  add(p.objective, -1.0);
  double deficit = 0.0;
  for (Mat& s : S) {
    const Mat h = (s + s.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
    deficit = std::max(deficit, -es.eigenvalues().minCoeff());
  }
  return by + trace_bound * deficit;
}

}  // namespace scs_detail

// Solves the dual  min b.y  s.t.  sum_k y_k C_k - F >= 0  with SCS; the cone multiplier is X.
template <class Scalar>
SolveOutput<Scalar> solve_scs(const SdpProblem<Scalar>& p, const SolveConfig& cfg) {
  using namespace scs_detail;
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<int> bid = p.block_index();

  // 1x1 blocks go to the nonnegative cone, which SCS wants ahead of the PSD cones
  std::vector<long> base(p.blocks.size());
  long rows = 0;
  std::vector<scs_int> psd_sizes;
  for (std::size_t r = 0; r < p.blocks.size(); ++r)
    if (p.blocks[r].size == 1) base[r] = rows++;
  const long n_lin = rows;
  for (std::size_t r = 0; r < p.blocks.size(); ++r)
    if (p.blocks[r].size > 1) {
      base[r] = rows;
      rows += cone_len<Scalar>(p.blocks[r].size);
      psd_sizes.push_back(p.blocks[r].size);
    }

  auto to_rows = [&](const SparseSym<Scalar>& m) {
    std::map<long, double> out;
    for (const auto& e : m) {
      if (e.row < e.col) continue;
      const int r = bid[static_cast<std::size_t>(e.row)];
      const int off = p.blocks[static_cast<std::size_t>(r)].offset;
      scatter<Scalar>(base[static_cast<std::size_t>(r)], p.blocks[static_cast<std::size_t>(r)].size, e.row - off,
                      e.col - off, e.value, out);
    }
    return out;
  };

  const long m = static_cast<long>(p.constraints.size());
  std::vector<scs_float> ax;
  std::vector<scs_int> ai, ap{0};
  for (const auto& c : p.constraints) {
    for (const auto& [row, v] : to_rows(c.matrix)) {
      if (v == 0.0) continue;
      ai.push_back(static_cast<scs_int>(row));
      ax.push_back(-v);
    }
    ap.push_back(static_cast<scs_int>(ai.size()));
  }
  std::vector<scs_float> b(static_cast<std::size_t>(rows), 0.0), c(static_cast<std::size_t>(m));
  for (const auto& [row, v] : to_rows(p.objective)) b[static_cast<std::size_t>(row)] = -v;
  for (long k = 0; k < m; ++k) c[static_cast<std::size_t>(k)] = p.constraints[static_cast<std::size_t>(k)].rhs;

  ScsMatrix A{ax.data(), ai.data(), ap.data(), static_cast<scs_int>(rows), static_cast<scs_int>(m)};
  ScsData data{static_cast<scs_int>(rows), static_cast<scs_int>(m), &A, nullptr, b.data(), c.data()};
  ScsCone cone{};
  cone.l = static_cast<scs_int>(n_lin);
  if constexpr (is_complex<Scalar>) {
    cone.cs = psd_sizes.empty() ? nullptr : psd_sizes.data();
    cone.cssize = static_cast<scs_int>(psd_sizes.size());
  } else {
    cone.s = psd_sizes.empty() ? nullptr : psd_sizes.data();
    cone.ssize = static_cast<scs_int>(psd_sizes.size());
  }
  ScsSettings st;
  scs_set_default_settings(&st);
  st.eps_abs = cfg.eps_abs;
  st.eps_rel = cfg.eps_rel;
  st.max_iters = cfg.max_iters;
  st.verbose = cfg.verbose ? 1 : 0;
  if (cfg.time_limit_s > 0) st.time_limit_secs = cfg.time_limit_s;

  std::vector<scs_float> x(static_cast<std::size_t>(m), 0.0), y(static_cast<std::size_t>(rows), 0.0),
      s(static_cast<std::size_t>(rows), 0.0);
  ScsSolution sol{x.data(), y.data(), s.data()};
  ScsInfo info{};
  const scs_int flag = scs(&data, &cone, &st, &sol, &info);

  SolveOutput<Scalar> out;
  BoundResult& res = out.result;
  res.solver = std::string("scs ") + scs_version();
  res.status = map_status(flag);
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (cfg.time_limit_s > 0 && elapsed >= cfg.time_limit_s && res.status != SolverStatus::optimal)
    res.status = SolverStatus::timeout;
  res.iterations = static_cast<int>(info.iter);
  res.primal_residual = info.res_dual;  // SCS dual residual measures our primal equalities
  res.dual_residual = info.res_pri;
  res.dual_value = info.pobj;
  res.value = info.dobj;
  res.gap = std::abs(info.pobj - info.dobj);
  res.safe_value = res.value + std::max(res.gap, cfg.eps_abs);
  if (cfg.trace_bound > 0.0 && (res.status == SolverStatus::optimal || res.status == SolverStatus::near_optimal)) {
    res.certified_value = certified_bound(p, x, cfg.trace_bound);
    res.safe_value = std::max(res.safe_value, res.certified_value);
  }
  res.wall_time_s = elapsed;

  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  for (std::size_t r = 0; r < p.blocks.size(); ++r) {
    const int n = p.blocks[r].size;
    Mat X = Mat::Zero(n, n);
    const long at = base[r];
    if (n == 1) {
      X(0, 0) = y[static_cast<std::size_t>(at)];
    } else {
      for (int j = 0; j < n; ++j)
        for (int i = j; i < n; ++i) {
          std::map<long, double> probe;
          scatter<Scalar>(at, n, i, j, Scalar(1.0), probe);
          if constexpr (is_complex<Scalar>) {
            std::map<long, double> probe_im;
            scatter<Scalar>(at, n, i, j, Scalar(0.0, 1.0), probe_im);
            double re = 0, im = 0;
            for (const auto& [row, w] : probe) re += w * y[static_cast<std::size_t>(row)];
            for (const auto& [row, w] : probe_im) im += w * y[static_cast<std::size_t>(row)];
            if (i != j) { re /= 2.0; im /= 2.0; }
            X(i, j) = Scalar(re, im);
            X(j, i) = std::conj(X(i, j));
          } else {
            double v = 0;
            for (const auto& [row, w] : probe) v += w * y[static_cast<std::size_t>(row)];
            if (i != j) v /= 2.0;
            X(i, j) = v;
            X(j, i) = v;
          }
        }
    }
    out.blocks.push_back(std::move(X));
  }
  return out;
}

}  // namespace envwit
