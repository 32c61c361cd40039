#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <set>
#include <utility>
#include <vector>

#include "envwit/sdp/problem.hpp"

namespace envwit {

struct SparsityPattern {
  int dim = 0;
  std::set<std::pair<int, int>> indices;

  bool contains(int i, int j) const { return indices.count({i, j}) > 0; }
  std::size_t size() const { return indices.size(); }
  bool operator==(const SparsityPattern&) const = default;
};

class UnionFind {
public:
  explicit UnionFind(int n) : parent_(static_cast<std::size_t>(n)), size_(static_cast<std::size_t>(n), 1) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int find(int x) {
    while (parent_[static_cast<std::size_t>(x)] != x) {
      parent_[static_cast<std::size_t>(x)] = parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(x)])];
      x = parent_[static_cast<std::size_t>(x)];
    }
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[static_cast<std::size_t>(a)] < size_[static_cast<std::size_t>(b)]) std::swap(a, b);
    parent_[static_cast<std::size_t>(b)] = a;
    size_[static_cast<std::size_t>(a)] += size_[static_cast<std::size_t>(b)];
    return true;
  }
  int size_of(int x) { return size_[static_cast<std::size_t>(find(x))]; }

private:
  std::vector<int> parent_;
  std::vector<int> size_;
};

// Components of the graph with edges from pairs in the pattern, each sorted,
// ordered by their smallest vertex. Vertices without any pair come out as singletons.
inline std::vector<std::vector<int>> components_of(int dim, const std::vector<std::pair<int, int>>& edges) {
  UnionFind uf(dim);
  for (const auto& [a, b] : edges) uf.unite(a, b);
  std::vector<int> slot(static_cast<std::size_t>(dim), -1);
  std::vector<std::vector<int>> comps;
  for (int v = 0; v < dim; ++v) {
    const int r = uf.find(v);
    if (slot[static_cast<std::size_t>(r)] < 0) {
      slot[static_cast<std::size_t>(r)] = static_cast<int>(comps.size());
      comps.emplace_back();
    }
    comps[static_cast<std::size_t>(slot[static_cast<std::size_t>(r)])].push_back(v);
  }
  return comps;
}

template <class Scalar>
SparsityPattern base_sparsity(const SparseSym<Scalar>& F, int dim, double zero_tol = 1e-12) {
  SparsityPattern p{dim, {}};
  for (const auto& e : F)
    if (std::abs(e.value) > zero_tol) {
      p.indices.insert({e.row, e.col});
      p.indices.insert({e.col, e.row});
    }
  for (int i = 0; i < dim; ++i) p.indices.insert({i, i});
  return p;
}

template <class Scalar>
std::set<std::pair<int, int>> support(const SparseSym<Scalar>& m, double zero_tol = 1e-12) {
  std::map<std::pair<int, int>, Scalar> acc;
  for (const auto& e : m) acc[{e.row, e.col}] += e.value;
  std::set<std::pair<int, int>> s;
  for (const auto& [rc, v] : acc)
    if (std::abs(v) > zero_tol) s.insert(rc);
  return s;
}

struct Extension {
  SparsityPattern pattern;
  std::vector<int> touched;  // constraint indices, ascending
};

// One step: constraints meeting theta contribute their whole support.
template <class Scalar>
Extension extend_sparsity(const SparsityPattern& theta, const std::vector<Constraint<Scalar>>& constraints,
                          double zero_tol = 1e-12) {
  Extension out{theta, {}};
  for (std::size_t k = 0; k < constraints.size(); ++k) {
    const auto supp = support(constraints[k].matrix, zero_tol);
    const bool hit = std::any_of(supp.begin(), supp.end(), [&](const auto& rc) { return theta.contains(rc.first, rc.second); });
    if (!hit) continue;
    out.touched.push_back(static_cast<int>(k));
    for (const auto& rc : supp) {
      out.pattern.indices.insert(rc);
      out.pattern.indices.insert({rc.second, rc.first});
    }
  }
  return out;
}

struct Completion {
  SparsityPattern pattern;
  std::vector<std::vector<int>> blocks;
  std::vector<int> permutation;  // permutation[new position] = original index
};

inline Completion complete_components(const SparsityPattern& theta) {
  std::vector<std::pair<int, int>> edges(theta.indices.begin(), theta.indices.end());
  Completion out{{theta.dim, {}}, components_of(theta.dim, edges), {}};
  for (const auto& b : out.blocks) {
    out.permutation.insert(out.permutation.end(), b.begin(), b.end());
    for (int i : b)
      for (int j : b) out.pattern.indices.insert({i, j});
  }
  return out;
}

struct EffectiveSparsity {
  SparsityPattern pattern;
  int iterations = 0;
};

// Fixed point of complete o extend from the base pattern.
template <class Scalar>
EffectiveSparsity effective_sparsity(const SparseSym<Scalar>& F, const std::vector<Constraint<Scalar>>& constraints, int dim,
                                     double zero_tol = 1e-12) {
  SparsityPattern theta = base_sparsity(F, dim, zero_tol);
  int it = 0;
  while (true) {
    ++it;
    SparsityPattern next = complete_components(extend_sparsity(theta, constraints, zero_tol).pattern).pattern;
    if (next == theta) return {std::move(theta), it};
    theta = std::move(next);
  }
}

}  // namespace envwit
