#pragma once

#include <set>
#include <string>
#include <vector>

#include "envwit/protocol.hpp"
#include "envwit/symmetric/types.hpp"

namespace envwit {

struct AnalyticBound {
  Rational value;
  double real = 0.0;
  std::vector<Rational> per_symbol_probs;  // maximizer q_a = n_a / L

  std::string str() const { return value.str(); }
};

// max over probe statistics of prod_a q_a^{n_a}, with 0^0 = 1
inline AnalyticBound omega_one(const OutcomeSequence& seq) {
  const int L = seq.length();
  AnalyticBound b{Rational(1), 0.0, {}};
  for (int n : seq.counts()) {
    const Rational q(n, L);
    b.per_symbol_probs.push_back(q);
    for (int k = 0; k < n; ++k) b.value *= q;
  }
  b.real = b.value.convert_to<double>();
  return b;
}

namespace detail {

// Restricted-growth labels of positions after merging i and j and closing under
// i ~ j => i+1 ~ j+1. Empty on an output conflict.
inline std::vector<int> cascade_merge(const std::vector<int>& labels, const std::vector<int>& out, int i, int j) {
  const int L = static_cast<int>(labels.size());
  std::vector<int> parent(static_cast<std::size_t>(L));
  for (int k = 0; k < L; ++k) parent[static_cast<std::size_t>(k)] = k;
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    return x;
  };
  std::vector<std::pair<int, int>> todo{{i, j}};
  std::vector<int> first(static_cast<std::size_t>(L), -1);
  for (int k = 0; k < L; ++k) {
    int& f = first[static_cast<std::size_t>(labels[static_cast<std::size_t>(k)])];
    if (f < 0) f = k;
    else todo.push_back({f, k});
  }
  while (!todo.empty()) {
    auto [a, c] = todo.back();
    todo.pop_back();
    a = find(a);
    c = find(c);
    if (a == c) continue;
    if (out[static_cast<std::size_t>(a)] != out[static_cast<std::size_t>(c)]) return {};
    parent[static_cast<std::size_t>(std::max(a, c))] = std::min(a, c);
    // successors of every member pair of the two classes
    for (int x = 0; x + 1 < L; ++x)
      for (int y = x + 1; y + 1 < L; ++y)
        if (find(x) == find(y) && find(x + 1) != find(y + 1)) todo.push_back({x + 1, y + 1});
  }
  std::vector<int> res(static_cast<std::size_t>(L));
  std::vector<int> id(static_cast<std::size_t>(L), -1);
  int next = 0;
  for (int k = 0; k < L; ++k) {
    int& r = id[static_cast<std::size_t>(find(k))];
    if (r < 0) r = next++;
    res[static_cast<std::size_t>(k)] = r;
  }
  return res;
}

}  // namespace detail

// Fewest states of a deterministic transition model that emits the sequence with certainty.
// Explores every partition reachable by cascade merges; each valid partition is reachable.
inline int deterministic_complexity(const OutcomeSequence& seq) {
  const std::vector<int>& out = seq.symbols();
  const int L = seq.length();
  std::vector<int> start(static_cast<std::size_t>(L));
  for (int k = 0; k < L; ++k) start[static_cast<std::size_t>(k)] = k;
  int best = L;
  std::set<std::vector<int>> seen{start};
  std::vector<std::vector<int>> stack{start};
  const int floor = seq.distinct();
  while (!stack.empty() && best > floor) {
    std::vector<int> cur = std::move(stack.back());
    stack.pop_back();
    const int classes = *std::max_element(cur.begin(), cur.end()) + 1;
    best = std::min(best, classes);
    for (int i = 0; i < L; ++i)
      for (int j = i + 1; j < L; ++j) {
        if (cur[static_cast<std::size_t>(i)] == cur[static_cast<std::size_t>(j)] ||
            out[static_cast<std::size_t>(i)] != out[static_cast<std::size_t>(j)])
          continue;
        std::vector<int> next = detail::cascade_merge(cur, out, i, j);
        if (!next.empty() && seen.insert(next).second) stack.push_back(std::move(next));
      }
  }
  return best;
}

enum class Triviality { trivially_one, strictly_below_one, unknown };

inline const char* to_string(Triviality t) {
  switch (t) {
    case Triviality::trivially_one: return "trivially_one";
    case Triviality::strictly_below_one: return "strictly_below_one";
    case Triviality::unknown: return "unknown";
  }
  return "?";
}

inline Triviality triviality_check(const OutcomeSequence& seq, int d_S, int d_E) {
  const int n = seq.distinct();
  if (d_S < n) return Triviality::strictly_below_one;
  if (d_E >= deterministic_complexity(seq)) return Triviality::trivially_one;
  return Triviality::unknown;
}

}  // namespace envwit
