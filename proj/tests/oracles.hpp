#pragma once

// Dense reference constructions used only by the tests.

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <vector>

#include "envwit/envwit.hpp"

namespace oracle {

using envwit::CMatrix;
using envwit::CVector;
using envwit::cplx;

// Permutation unitary of the witness example: (e, s) -> (e', s'), index e * 2 + s.
inline CMatrix witness_unitary() {
  const std::pair<std::pair<int, int>, std::pair<int, int>> map[] = {
      {{0, 0}, {1, 0}}, {{1, 0}, {2, 0}}, {{0, 1}, {2, 1}}, {{1, 1}, {1, 1}}, {{2, 1}, {0, 0}}, {{2, 0}, {0, 1}}};
  CMatrix u = CMatrix::Zero(6, 6);
  for (const auto& [from, to] : map) u(to.first * 2 + to.second, from.first * 2 + from.second) = 1.0;
  return u;
}

// Choi matrix sum_ij |i><j| (x) map(|i><j|), input index most significant.
inline CMatrix choi_of_map(const std::function<CMatrix(const CMatrix&)>& map, int d_in) {
  CMatrix out;
  for (int i = 0; i < d_in; ++i)
    for (int j = 0; j < d_in; ++j) {
      CMatrix e = CMatrix::Zero(d_in, d_in);
      e(i, j) = 1.0;
      const CMatrix img = map(e);
      if (out.size() == 0) out = CMatrix::Zero(d_in * img.rows(), d_in * img.cols());
      out.block(i * img.rows(), j * img.cols(), img.rows(), img.cols()) = img;
    }
  return out;
}

inline std::vector<std::vector<int>> all_strings(int d, int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(static_cast<std::size_t>(n), 0);
  while (true) {
    out.push_back(cur);
    int k = n - 1;
    while (k >= 0 && ++cur[static_cast<std::size_t>(k)] == d) cur[static_cast<std::size_t>(k--)] = 0;
    if (k < 0) break;
  }
  return out;
}

inline int string_index(const std::vector<int>& s, int d) {
  int idx = 0;
  for (int c : s) idx = idx * d + c;
  return idx;
}

// Rows are the normalized symmetric vectors in the order of space.types().
inline CMatrix symmetric_isometry(const envwit::SymSpace& space) {
  const int d = space.local_dim(), n = space.copies();
  int D = 1;
  for (int k = 0; k < n; ++k) D *= d;
  CMatrix v = CMatrix::Zero(space.size(), D);
  for (const auto& s : all_strings(d, n)) {
    std::vector<int> counts(static_cast<std::size_t>(d), 0);
    for (int c : s) ++counts[static_cast<std::size_t>(c)];
    const int t = space.index_of(envwit::TypeVector(counts));
    v(t, string_index(s, d)) = 1.0;
  }
  for (int t = 0; t < space.size(); ++t) v.row(t) /= v.row(t).norm();
  return v;
}

// Average of all permutation operators on (C^d)^n.
inline CMatrix symmetrizer(int d, int n) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  const auto strings = all_strings(d, n);
  const int D = static_cast<int>(strings.size());
  CMatrix p = CMatrix::Zero(D, D);
  int count = 0;
  do {
    ++count;
    for (const auto& s : strings) {
      std::vector<int> t(static_cast<std::size_t>(n));
      for (int k = 0; k < n; ++k) t[static_cast<std::size_t>(k)] = s[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])];
      p(string_index(t, d), string_index(s, d)) += 1.0;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return p / static_cast<double>(count);
}

// Symmetric-basis coordinates of (C_U)^{(x)N}: C_U = v v^dagger with v the normalized Choi vector,
// and <sym t| v^{(x)N}> = sqrt(mult t) prod_k v_k^{t_k}.
inline CVector tensor_power_coordinates(const CMatrix& u, const envwit::SymSpace& space) {
  const CVector v = envwit::choi_vector(u) / std::sqrt(static_cast<double>(u.rows()));
  CVector w(space.size());
  for (int t = 0; t < space.size(); ++t) {
    cplx prod = std::sqrt(space.mult(t));
    const auto& ty = space.type(t);
    for (int k = 0; k < ty.dim(); ++k)
      for (int r = 0; r < ty[k]; ++r) prod *= v(k);
    w(t) = prod;
  }
  return w;
}

// <C, w w^dagger> = w^dagger C^dagger w summed over the sparse entries.
template <class Scalar>
cplx rank_one_inner(const envwit::SparseSym<Scalar>& c, const CVector& w) {
  cplx s = 0.0;
  for (const auto& e : c) s += envwit::conj_value(e.value) * w(e.row) * std::conj(w(e.col));
  return s;
}

inline envwit::MeasurementProtocol random_protocol(int d_E, int d_S, int outcomes, std::mt19937_64& rng) {
  // POVM from a random unitary's columns: E_a = sum over a block of projectors, rotated
  const CMatrix u = envwit::haar_unitary(d_S, rng);
  std::vector<CMatrix> povm(static_cast<std::size_t>(outcomes), CMatrix::Zero(d_S, d_S));
  for (int k = 0; k < d_S; ++k) povm[static_cast<std::size_t>(k % outcomes)] += u.col(k) * u.col(k).adjoint();
  CMatrix rhoE = CMatrix::Zero(d_E, d_E);
  rhoE(0, 0) = 1.0;
  return envwit::MeasurementProtocol(d_S, d_E, envwit::random_density(d_S, rng), rhoE, povm);
}

}  // namespace oracle
