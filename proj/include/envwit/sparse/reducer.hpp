#pragma once

#include <map>
#include <unordered_set>

#include "envwit/sparse/pattern.hpp"

namespace envwit {

// Constraint access for the reducer: lookup by entry, materialization by id.
template <class Scalar>
class ConstraintSource {
public:
  virtual ~ConstraintSource() = default;
  virtual int dim() const = 0;
  virtual std::int64_t size() const = 0;
  // ids whose (Hermitian) support contains (a, b)
  virtual void touching(int a, int b, std::vector<std::int64_t>& ids) const = 0;
  virtual Constraint<Scalar> get(std::int64_t id) const = 0;
  virtual std::vector<std::int64_t> inhomogeneous() const = 0;
  // equalities this id stands for before Hermitian de-duplication
  virtual std::int64_t raw_weight(std::int64_t) const { return 1; }
  virtual std::int64_t raw_size() const { return size(); }
};

// Wraps a materialized single-block problem.
template <class Scalar>
class ProblemSource : public ConstraintSource<Scalar> {
public:
  explicit ProblemSource(const SdpProblem<Scalar>& p, double zero_tol = 1e-12) : p_(p), dim_(p.dim()) {
    if (p.blocks.size() != 1) throw InvalidArgument("reduction expects a single PSD block");
    for (std::size_t k = 0; k < p.constraints.size(); ++k) {
      for (const auto& rc : support(p.constraints[k].matrix, zero_tol))
        if (rc.first <= rc.second) index_.push_back({key(rc.first, rc.second), static_cast<std::int64_t>(k)});
      if (p.constraints[k].rhs != 0.0) inhom_.push_back(static_cast<std::int64_t>(k));
    }
    std::sort(index_.begin(), index_.end());
  }
  int dim() const override { return dim_; }
  std::int64_t size() const override { return static_cast<std::int64_t>(p_.constraints.size()); }
  void touching(int a, int b, std::vector<std::int64_t>& ids) const override {
    const std::int64_t k = key(std::min(a, b), std::max(a, b));
    auto lo = std::lower_bound(index_.begin(), index_.end(), std::make_pair(k, std::int64_t{-1}));
    for (; lo != index_.end() && lo->first == k; ++lo) ids.push_back(lo->second);
  }
  Constraint<Scalar> get(std::int64_t id) const override { return p_.constraints[static_cast<std::size_t>(id)]; }
  std::vector<std::int64_t> inhomogeneous() const override { return inhom_; }

private:
  std::int64_t key(int a, int b) const { return static_cast<std::int64_t>(a) * dim_ + b; }
  const SdpProblem<Scalar>& p_;
  int dim_;
  std::vector<std::pair<std::int64_t, std::int64_t>> index_;
  std::vector<std::int64_t> inhom_;
};

template <class Scalar>
struct ReductionResult {
  SdpProblem<Scalar> reduced;
  std::vector<int> permutation;  // permutation[original index] = position in the block-ordered variable
  std::vector<std::vector<int>> blocks;
  std::vector<std::int64_t> kept_constraints;
  std::vector<std::int64_t> discarded_constraints;  // filled only when the source is small enough to list
  std::int64_t discarded_count = 0;
  bool exact = false;
  int iterations = 0;
  std::int64_t kept_variables = 0;
  std::int64_t kept_raw_constraints = 0;
  std::int64_t original_variables = 0;
  std::int64_t original_raw_constraints = 0;

  SparsityPattern pattern() const {
    SparsityPattern p{static_cast<int>(permutation.size()), {}};
    for (const auto& b : blocks)
      for (int i : b)
        for (int j : b) p.indices.insert({i, j});
    return p;
  }

  std::map<int, int> block_size_histogram() const {
    std::map<int, int> h;
    for (const auto& b : blocks) ++h[static_cast<int>(b.size())];
    return h;
  }
};

struct ReduceOptions {
  double zero_tol = 1e-12;
  std::int64_t max_pattern_entries = 50'000'000;
  std::int64_t list_discarded_below = 5'000'000;
};

template <class Scalar>
ReductionResult<Scalar> reduce_with_source(const SparseSym<Scalar>& F, const ConstraintSource<Scalar>& src,
                                           const ReduceOptions& opt = {}) {
  const int n = src.dim();
  UnionFind uf(n);
  std::unordered_set<std::int64_t> processed;
  std::unordered_set<std::int64_t> kept;
  std::vector<std::int64_t> kept_order;
  std::vector<Constraint<Scalar>> kept_data;
  auto pk = [n](int a, int b) { return static_cast<std::int64_t>(std::min(a, b)) * n + std::max(a, b); };

  std::vector<std::pair<int, int>> frontier;
  for (const auto& rc : support(F, opt.zero_tol)) {
    frontier.push_back(rc);
    uf.unite(rc.first, rc.second);
  }
  for (int i = 0; i < n; ++i) frontier.push_back({i, i});

  std::vector<std::int64_t> ids;
  int iterations = 0;
  while (true) {
    ++iterations;
    std::vector<std::int64_t> fresh;
    for (const auto& [a, b] : frontier) {
      if (!processed.insert(pk(a, b)).second) continue;
      ids.clear();
      src.touching(a, b, ids);
      for (std::int64_t id : ids)
        if (kept.insert(id).second) fresh.push_back(id);
    }
    for (std::int64_t id : fresh) {
      Constraint<Scalar> c = src.get(id);
      for (const auto& e : c.matrix)
        if (std::abs(e.value) > opt.zero_tol) uf.unite(e.row, e.col);
      kept_order.push_back(id);
      kept_data.push_back(std::move(c));
    }
    // completion: every pair inside a component joins the pattern
    std::map<int, std::vector<int>> comps;
    std::int64_t entries = 0;
    for (int v = 0; v < n; ++v) comps[uf.find(v)].push_back(v);
    for (const auto& [root, members] : comps) {
      entries += static_cast<std::int64_t>(members.size()) * static_cast<std::int64_t>(members.size());
      if (static_cast<int>(members.size()) == n && n > 1)
        throw NoReduction("effective sparsity covers the full variable; solve densely");
    }
    if (entries > opt.max_pattern_entries) throw IntractableSize("effective sparsity exceeds the pattern budget");
    frontier.clear();
    for (const auto& [root, members] : comps) {
      if (members.size() == 1) continue;
      for (std::size_t x = 0; x < members.size(); ++x)
        for (std::size_t y = x; y < members.size(); ++y)
          if (!processed.count(pk(members[x], members[y]))) frontier.push_back({members[x], members[y]});
    }
    if (frontier.empty()) break;
  }

  ReductionResult<Scalar> out;
  out.iterations = iterations;
  {
    std::map<int, std::vector<int>> comps;
    for (int v = 0; v < n; ++v) comps[uf.find(v)].push_back(v);
    out.blocks.clear();
    for (auto& [root, members] : comps) out.blocks.push_back(std::move(members));
    std::sort(out.blocks.begin(), out.blocks.end(), [](const auto& x, const auto& y) { return x.front() < y.front(); });
  }
  if (out.blocks.size() == 1 && n > 1) throw NoReduction("effective sparsity covers the full variable; solve densely");

  out.permutation.assign(static_cast<std::size_t>(n), -1);
  int pos = 0;
  for (const auto& b : out.blocks) {
    out.reduced.blocks.push_back({pos, static_cast<int>(b.size())});
    for (int v : b) out.permutation[static_cast<std::size_t>(v)] = pos++;
    out.kept_variables += static_cast<std::int64_t>(b.size()) * static_cast<std::int64_t>(b.size());
  }
  auto remap = [&](const SparseSym<Scalar>& m) {
    SparseSym<Scalar> r;
    r.reserve(m.size());
    for (const auto& e : m)
      r.push_back({out.permutation[static_cast<std::size_t>(e.row)], out.permutation[static_cast<std::size_t>(e.col)], e.value});
    return r;
  };
  out.reduced.objective = remap(F);

  std::vector<std::size_t> order(kept_order.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return kept_order[x] < kept_order[y]; });
  for (std::size_t k : order) {
    out.kept_constraints.push_back(kept_order[k]);
    out.kept_raw_constraints += src.raw_weight(kept_order[k]);
    out.reduced.constraints.push_back({remap(kept_data[k].matrix), kept_data[k].rhs});
  }
  out.discarded_count = src.size() - static_cast<std::int64_t>(kept.size());
  if (src.size() <= opt.list_discarded_below)
    for (std::int64_t id = 0; id < src.size(); ++id)
      if (!kept.count(id)) out.discarded_constraints.push_back(id);
  out.exact = true;
  for (std::int64_t id : src.inhomogeneous())
    if (!kept.count(id)) out.exact = false;
  out.original_variables = static_cast<std::int64_t>(n) * n;
  out.original_raw_constraints = src.raw_size();
  return out;
}

template <class Scalar>
ReductionResult<Scalar> reduce_problem(const SdpProblem<Scalar>& p, double zero_tol = 1e-12) {
  ProblemSource<Scalar> src(p, zero_tol);
  ReduceOptions opt;
  opt.zero_tol = zero_tol;
  auto r = reduce_with_source(p.objective, src, opt);
  r.reduced.realify_mode = p.realify_mode;
  if (p.raw_constraint_count >= 0) r.original_raw_constraints = p.raw_constraint_count;
  return r;
}

}  // namespace envwit
