#pragma once

#include <Eigen/Sparse>
#include <map>

#include "envwit/probability.hpp"
#include "envwit/symmetric/types.hpp"

namespace envwit {

using SparseC = Eigen::SparseMatrix<cplx>;

inline TypeVector type_of(const std::vector<int>& slots, int d) {
  TypeVector t = TypeVector::zero(d);
  for (int u : slots) ++t.counts[static_cast<std::size_t>(u)];
  return t;
}

// x = V_N (X^T (x) 1) V_N^dagger in the normalized symmetric basis.
// Each nonzero of X is paired with every tail type s of the N - L untouched slots:
// x_{t,t'} += X_{u,u'} mult(s) / sqrt(mult(t) mult(t')), t = T(u') + s, t' = T(u) + s.
inline SparseC project_objective(const ObjectiveOperator& X, int N, const SymSpace& space, double zero_tol = 0.0) {
  const int d = X.d_ES() * X.d_ES();
  const int L = X.L();
  if (N < L) throw DimensionMismatch("hierarchy level N must be at least the sequence length");
  if (space.local_dim() != d || space.copies() != N)
    throw DimensionMismatch("symmetric space does not match d_ES^2 and N");
  const SymSpace tail(d, N - L);
  std::map<std::pair<int, int>, cplx> acc;
  for (const auto& e : X.nonzeros(50'000'000, zero_tol)) {
    const TypeVector tr = type_of(e.col, d);
    const TypeVector tc = type_of(e.row, d);
    for (int k = 0; k < tail.size(); ++k) {
      const TypeVector& s = tail.type(k);
      const int a = space.index_of(tr + s);
      const int b = space.index_of(tc + s);
      acc[{a, b}] += e.value * tail.mult(k) / std::sqrt(space.mult(a) * space.mult(b));
    }
  }
  std::vector<Eigen::Triplet<cplx>> trip;
  trip.reserve(acc.size());
  for (const auto& [ab, v] : acc)
    if (std::abs(v) > zero_tol) trip.emplace_back(ab.first, ab.second, v);
  SparseC x(space.size(), space.size());
  x.setFromTriplets(trip.begin(), trip.end());
  return x;
}

}  // namespace envwit
