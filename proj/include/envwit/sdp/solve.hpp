#pragma once

#include <cstdlib>

#include "envwit/sdp/scs_solver.hpp"

namespace envwit {

// Backend named by ENVWIT_SOLVER; only "scs" is built in.
inline std::string selected_solver() {
  const char* env = std::getenv("ENVWIT_SOLVER");
  return env && *env ? std::string(env) : std::string("scs");
}

template <class Scalar>
SolveOutput<Scalar> solve_full(const SdpProblem<Scalar>& p, const SolveConfig& cfg = {}) {
  const std::string name = selected_solver();
  if (name != "scs") throw SolverUnavailable("solver '" + name + "' is not available (built in: scs)");
  const auto diag = validate(p);
  if (!diag.empty()) throw InvalidArgument("invalid problem: " + diag.front());
  return solve_scs(p, cfg);
}

template <class Scalar>
BoundResult solve(const SdpProblem<Scalar>& p, const SolveConfig& cfg = {}) {
  return solve_full(p, cfg).result;
}

}  // namespace envwit
