#pragma once

#include <functional>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>

#include "envwit/analytic.hpp"
#include "envwit/io/json_io.hpp"
#include "envwit/io/toml_io.hpp"
#include "envwit/relaxation/builder.hpp"
#include "envwit/sdp/solve.hpp"

namespace envwit {

struct BoundRequest {
  MeasurementProtocol protocol;  // carries d_E
  OutcomeSequence seq;
  int N = 1;
  bool ppt = false;
  bool sparse = true;
  bool short_circuit = true;
  SolveConfig solve{};
  BuildOptions build{};
};

struct BoundReport {
  BoundResult result;
  Triviality triviality = Triviality::unknown;
  std::string note;
  std::string representation;
  std::string realify_mode;
  std::optional<ReductionReport> reduction;
  double definetti_error_bound = 0.0;
  std::optional<AnalyticBound> analytic;  // closed form, d_E = 1 only
};

inline std::string protocol_hash(const MeasurementProtocol& p) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << std::hash<std::string>{}(protocol_to_toml(p));
  return os.str();
}

inline std::string cache_key(const BoundRequest& r) {
  std::ostringstream os;
  os << protocol_hash(r.protocol) << "|" << r.seq.str() << "|dE=" << r.protocol.d_E() << "|N=" << r.N
     << "|ppt=" << r.ppt << "|eps=" << r.solve.eps_abs << "," << r.solve.eps_rel;
  return os.str();
}

namespace detail {

template <class Scalar>
BoundResult solve_with_trace(const SdpProblem<Scalar>& p, SolveConfig cfg, double trace) {
  cfg.trace_bound = trace;
  return solve(p, cfg);
}

inline double embed_factor(RealifyMode m) { return m == RealifyMode::embed ? 2.0 : 1.0; }

inline BoundResult solve_dense(const RelaxationSpec& spec, const BoundRequest& req, BoundReport& rep) {
  const RealSdp p = realify(build_relaxation(spec, req.build));
  rep.realify_mode = to_string(p.realify_mode);
  const double blocks = spec.ppt ? 1.0 + spec.N / 2 : 1.0;
  return solve_with_trace(p, req.solve, blocks * embed_factor(p.realify_mode));
}

template <class Scalar>
BoundResult solve_sparse(const RelaxationSpec& spec, const SparseC& x, const BoundRequest& req, BoundReport& rep) {
  const int d = spec.protocol.d_ES();
  SymmetricTraceConstraints<Scalar> src(d, spec.N, std::is_same_v<Scalar, cplx>);
  ReduceOptions opt;
  opt.zero_tol = req.build.zero_tol;
  const ReductionResult<Scalar> red = reduce_with_source(to_sparse_sym<Scalar>(x, req.build.zero_tol), src, opt);
  rep.reduction = make_report(red);
  if (!red.exact) rep.note += "reduction dropped an inhomogeneous constraint; value is an outer approximation. ";
  if constexpr (std::is_same_v<Scalar, double>) {
    SdpProblem<double> p = red.reduced;
    p.realify_mode = RealifyMode::drop_imaginary;
    rep.realify_mode = to_string(p.realify_mode);
    return solve_with_trace(p, req.solve, 1.0);
  } else {
    const RealSdp p = realify(red.reduced, true);
    rep.realify_mode = to_string(p.realify_mode);
    return solve_with_trace(p, req.solve, 2.0);
  }
}

}  // namespace detail

// triviality screen -> relaxation -> optional reduction -> solve
inline BoundReport compute_bound(const BoundRequest& req, BoundCache* cache = nullptr) {
  BoundReport rep;
  const int L = req.seq.length();
  const int d = req.protocol.d_ES();
  rep.definetti_error_bound = definetti_error_bound(L, d, std::max(req.N, L));
  rep.triviality = triviality_check(req.seq, req.protocol.d_S(), req.protocol.d_E());
  if (req.protocol.d_E() == 1) rep.analytic = omega_one(req.seq);

  if (req.short_circuit && rep.triviality == Triviality::trivially_one) {
    rep.note = "d_E >= DC and d_S >= n(seq): the maximum is 1 and the bound is trivial";
    rep.representation = "none";
    rep.realify_mode = "none";
    BoundResult& r = rep.result;
    r.value = r.safe_value = r.dual_value = 1.0;
    r.N = req.N;
    r.ppt = req.ppt;
    r.status = SolverStatus::optimal;
    r.solver = "analytic";
    return rep;
  }

  const RelaxationSpec spec{req.protocol, req.seq, req.N, req.ppt,
                            req.ppt ? Representation::full_space : Representation::symmetric};
  spec.validate();
  rep.representation = to_string(spec.representation);

  const std::string key = cache_key(req);
  if (cache)
    if (auto hit = cache->find(key)) {
      rep.result = *hit;
      rep.note = "cached";
      return rep;
    }

  if (req.ppt) {
    if (req.sparse) rep.note += "sparse reduction is not applied to multi-block PPT problems. ";
    rep.result = detail::solve_dense(spec, req, rep);
  } else if (req.sparse) {
    SymSpace space(d * d, req.N);
    const SparseC x = symmetric_objective(spec, space);
    try {
      rep.result = req.build.force_complex || max_imag(x) > kRealTol ? detail::solve_sparse<cplx>(spec, x, req, rep)
                                                                       : detail::solve_sparse<double>(spec, x, req, rep);
    } catch (const NoReduction&) {
      rep.note += "no sparsity to exploit; solved densely. ";
      rep.reduction.reset();
      rep.result = detail::solve_dense(spec, req, rep);
    }
  } else {
    rep.result = detail::solve_dense(spec, req, rep);
  }
  rep.result.N = req.N;
  rep.result.ppt = req.ppt;
  if (cache && rep.result.has_value()) cache->store(key, rep.result);
  return rep;
}

inline nlohmann::json to_json(const BoundReport& r) {
  nlohmann::json j = to_json(r.result);
  j["triviality"] = to_string(r.triviality);
  j["representation"] = r.representation;
  j["realify_mode"] = r.realify_mode;
  j["definetti_error_bound"] = r.definetti_error_bound;
  j["reduction"] = r.reduction ? to_json(*r.reduction) : nlohmann::json(nullptr);
  if (r.analytic) j["omega_one"] = {{"exact", r.analytic->str()}, {"value", r.analytic->real}};
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

}  // namespace envwit
