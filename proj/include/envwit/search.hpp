#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <thread>
#include <utility>
#include <vector>

#include "envwit/probability.hpp"

namespace envwit {

// H from d^2 real parameters: diagonal h_jj, then (Re, Im) of H_jk for j < k in row order.
inline CMatrix hermitian_from_params(const RVector& x, int d) {
  if (x.size() != static_cast<Eigen::Index>(d) * d) throw SizeMismatch("parameter vector must have d^2 entries");
  CMatrix h(d, d);
  Eigen::Index k = d;
  for (int j = 0; j < d; ++j) h(j, j) = x(j);
  for (int j = 0; j < d; ++j)
    for (int m = j + 1; m < d; ++m, k += 2) {
      h(j, m) = cplx(x(k), x(k + 1));
      h(m, j) = cplx(x(k), -x(k + 1));
    }
  return h;
}

inline RVector params_from_hermitian(const CMatrix& h) {
  const int d = static_cast<int>(h.rows());
  RVector x(static_cast<Eigen::Index>(d) * d);
  Eigen::Index k = d;
  for (int j = 0; j < d; ++j) x(j) = h(j, j).real();
  for (int j = 0; j < d; ++j)
    for (int m = j + 1; m < d; ++m, k += 2) {
      x(k) = 0.5 * (h(j, m).real() + h(m, j).real());
      x(k + 1) = 0.5 * (h(j, m).imag() - h(m, j).imag());
    }
  return x;
}

// dp = 2 Re Tr[D^dagger dU] with D = sum_l Theta_l U rho_{l-1}, where Theta_l is the
// effect seen right after the l-th unitary step.
inline CMatrix probability_sensitivity(const MeasurementProtocol& p, const CMatrix& u, const OutcomeSequence& seq,
                                       double* value = nullptr) {
  const int L = seq.length();
  const int dE = p.d_E(), dS = p.d_S();
  std::vector<CMatrix> rho{p.initial_state()};
  for (int l = 0; l + 1 < L; ++l) rho.push_back(apply_measure_prepare(p, seq[l], u * rho.back() * u.adjoint()));
  CMatrix theta = kron(CMatrix::Identity(dE, dE), p.effect(seq[L - 1]));
  if (value) *value = (theta * u * rho.back() * u.adjoint()).trace().real();
  const CMatrix probe = kron(CMatrix::Identity(dE, dE), p.rho_S0());
  CMatrix d = CMatrix::Zero(u.rows(), u.cols());
  for (int l = L - 1; l >= 0; --l) {
    d += theta * u * rho[static_cast<std::size_t>(l)];
    if (l == 0) break;
    const CMatrix back = u.adjoint() * theta * u;
    theta = kron(trace_second(back * probe, dE, dS), p.effect(seq[l - 1]));
  }
  return d;
}

// Gradient of p(exp(iH)) in the parameters of hermitian_from_params.
inline RVector probability_gradient(const MeasurementProtocol& p, const OutcomeSequence& seq, const RVector& x,
                                    double* value = nullptr) {
  const int d = p.d_ES();
  const CMatrix h = hermitian_from_params(x, d);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  const CMatrix& v = es.eigenvectors();
  const RVector& lam = es.eigenvalues();
  CVector ph = lam.unaryExpr([](double l) { return std::exp(cplx(0.0, l)); }).cast<cplx>();
  const CMatrix u = v * ph.asDiagonal() * v.adjoint();
  const CMatrix dt = v.adjoint() * probability_sensitivity(p, u, seq, value) * v;
  CMatrix w(d, d);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) {
      const double gap = lam(j) - lam(k);
      const cplx f = std::abs(gap) < 1e-9 ? cplx(0.0, 1.0) * 0.5 * (ph(j) + ph(k)) : (ph(j) - ph(k)) / gap;
      w(j, k) = std::conj(dt(j, k)) * f;
    }
  const CMatrix g = v * w.transpose() * v.adjoint();
  RVector grad(static_cast<Eigen::Index>(d) * d);
  Eigen::Index k = d;
  for (int j = 0; j < d; ++j) grad(j) = 2.0 * g(j, j).real();
  for (int j = 0; j < d; ++j)
    for (int m = j + 1; m < d; ++m, k += 2) {
      grad(k) = 2.0 * (g(j, m) + g(m, j)).real();
      grad(k + 1) = 2.0 * (g(j, m) - g(m, j)).imag();
    }
  return grad;
}

struct SearchConfig {
  int restarts = 64;
  int max_iters = 4000;
  std::uint64_t seed = 0;
  double grad_tol = 1e-9;
  double armijo = 1e-4;
  std::optional<CMatrix> warm_start;  // replaces the first restart's random point
  bool record_trajectory = false;
  int threads = 1;
};

struct SearchResult {
  double value = 0.0;
  CMatrix unitary;
  int restarts_used = 0;
  bool converged = false;
  std::vector<std::pair<int, double>> trajectory;
};

namespace detail {

struct RestartOutcome {
  double value = -1.0;
  RVector x;
  bool converged = false;
  std::vector<std::pair<int, double>> trajectory;
};

inline RestartOutcome ascend(const MeasurementProtocol& p, const OutcomeSequence& seq, RVector x, const SearchConfig& cfg) {
  RestartOutcome r;
  double val = 0.0;
  RVector g = probability_gradient(p, seq, x, &val);
  double step = 1.0;
  int stall = 0;
  for (int it = 0; it < cfg.max_iters; ++it) {
    if (cfg.record_trajectory) r.trajectory.push_back({it, val});
    const double g2 = g.squaredNorm();
    if (std::sqrt(g2) < cfg.grad_tol || val >= 1.0 - 1e-13) {
      r.converged = true;
      break;
    }
    step *= 2.0;
    RVector trial;
    double tv = 0.0;
    while (true) {
      trial = x + step * g;
      tv = sequence_probability(p, expi_hermitian(hermitian_from_params(trial, p.d_ES())), seq);
      if (tv >= val + cfg.armijo * step * g2 || step < 1e-14) break;
      step *= 0.5;
    }
    if (tv <= val) {
      r.converged = true;
      break;
    }
    stall = tv - val < 1e-15 ? stall + 1 : 0;
    x = std::move(trial);
    g = probability_gradient(p, seq, x, &val);
    if (stall > 20) {
      r.converged = true;
      break;
    }
  }
  r.value = val;
  r.x = std::move(x);
  return r;
}

}  // namespace detail

inline RVector random_parameters(int d, std::uint64_t seed, int restart) {
  std::seed_seq ss{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), static_cast<std::uint32_t>(restart)};
  std::mt19937_64 rng(ss);
  const double pi = 3.14159265358979323846;
  std::uniform_real_distribution<double> dist(-pi / d, pi / d);
  RVector x(static_cast<Eigen::Index>(d) * d);
  for (Eigen::Index k = 0; k < x.size(); ++k) x(k) = dist(rng);
  return x;
}

// Multi-start gradient ascent over U = exp(iH); restart r draws from (seed, r), best-of ties go to the lower r.
inline SearchResult maximize_probability(const MeasurementProtocol& p, const OutcomeSequence& seq, const SearchConfig& cfg = {}) {
  check_compatible(p, seq);
  if (cfg.restarts < 1) throw InvalidArgument("search needs at least one restart");
  const int d = p.d_ES();
  std::vector<detail::RestartOutcome> out(static_cast<std::size_t>(cfg.restarts));
  auto run = [&](int r) {
    RVector x0 = r == 0 && cfg.warm_start ? params_from_hermitian(unitary_log(*cfg.warm_start)) : random_parameters(d, cfg.seed, r);
    out[static_cast<std::size_t>(r)] = detail::ascend(p, seq, std::move(x0), cfg);
  };
  const int threads = std::max(1, std::min(cfg.threads, cfg.restarts));
  if (threads == 1) {
    for (int r = 0; r < cfg.restarts; ++r) run(r);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        for (int r = t; r < cfg.restarts; r += threads) run(r);
      });
    for (auto& th : pool) th.join();
  }
  std::size_t best = 0;
  for (std::size_t r = 1; r < out.size(); ++r)
    if (out[r].value > out[best].value) best = r;
  SearchResult res;
  res.unitary = expi_hermitian(hermitian_from_params(out[best].x, d));
  res.value = sequence_probability(p, res.unitary, seq);
  res.restarts_used = cfg.restarts;
  res.converged = out[best].converged;
  res.trajectory = std::move(out[best].trajectory);
  return res;
}

}  // namespace envwit
