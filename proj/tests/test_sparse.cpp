#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace envwit;

namespace {

SparseSym<double> sym(std::initializer_list<std::pair<std::pair<int, int>, double>> entries) {
  SparseSym<double> m;
  for (const auto& [rc, v] : entries) {
    m.push_back({rc.first, rc.second, v});
    if (rc.first != rc.second) m.push_back({rc.second, rc.first, v});
  }
  return m;
}

std::set<std::set<int>> as_partition(const std::vector<std::vector<int>>& blocks) {
  std::set<std::set<int>> out;
  for (const auto& b : blocks) out.insert(std::set<int>(b.begin(), b.end()));
  return out;
}

// Closure by dense boolean matrices: extend, then transitive closure of the adjacency.
std::vector<std::vector<bool>> closure_oracle(const RealSdp& p) {
  const int n = p.dim();
  std::vector<std::vector<bool>> t(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n), false));
  for (int i = 0; i < n; ++i) t[i][i] = true;
  for (const auto& e : p.objective)
    if (e.value != 0.0) t[e.row][e.col] = t[e.col][e.row] = true;
  while (true) {
    auto next = t;
    for (const auto& c : p.constraints) {
      bool hit = false;
      for (const auto& e : c.matrix) hit = hit || t[e.row][e.col];
      if (hit)
        for (const auto& e : c.matrix) next[e.row][e.col] = next[e.col][e.row] = true;
    }
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (next[i][k] && next[k][j]) next[i][j] = true;
    if (next == t) return t;
    t = std::move(next);
  }
}

RealSdp random_toy(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dim(3, 12);
  const int n = dim(rng);
  std::uniform_int_distribution<int> idx(0, n - 1), count(0, 2 * n);
  std::bernoulli_distribution coin(0.3);
  RealSdp p;
  p.blocks = {{0, n}};
  const int a = idx(rng), b = idx(rng);
  p.objective = sym({{{a, b}, 1.0}});
  const int m = count(rng);
  for (int k = 0; k < m; ++k) {
    Constraint<double> c;
    const int r = idx(rng), s = idx(rng);
    c.matrix = sym({{{r, s}, 1.0}});
    if (coin(rng)) {
      const int r2 = idx(rng), s2 = idx(rng);
      if (std::make_pair(std::min(r2, s2), std::max(r2, s2)) != std::make_pair(std::min(r, s), std::max(r, s)))
        for (const auto& e : sym({{{r2, s2}, -0.5}})) c.matrix.push_back(e);
    }
    c.rhs = coin(rng) ? 1.0 : 0.0;
    p.constraints.push_back(std::move(c));
  }
  return p;
}

SolveConfig tight(double trace = 0.0) {
  SolveConfig c;
  c.eps_abs = c.eps_rel = 1e-9;
  c.trace_bound = trace;
  return c;
}

}  // namespace

TEST(Pattern, BaseSparsityHasObjectiveAndDiagonal) {
  const auto base = base_sparsity(sym({{{0, 2}, 1.0}}), 4);
  EXPECT_EQ(base.size(), 6u);
  EXPECT_TRUE(base.contains(0, 2));
  EXPECT_TRUE(base.contains(2, 0));
  EXPECT_TRUE(base.contains(3, 3));
  EXPECT_FALSE(base.contains(0, 1));
}

TEST(Pattern, AdjacencyGraphExample) {
  // vertices 1..7 with components {5 2 7 3}, {4}, {1 6}
  SparsityPattern theta{7, {}};
  for (auto [a, b] : {std::pair{5, 2}, std::pair{2, 7}, std::pair{7, 3}, std::pair{1, 6}}) {
    theta.indices.insert({a - 1, b - 1});
    theta.indices.insert({b - 1, a - 1});
  }
  for (int i = 0; i < 7; ++i) theta.indices.insert({i, i});
  const Completion c = complete_components(theta);
  EXPECT_EQ(as_partition(c.blocks), (std::set<std::set<int>>{{4, 1, 6, 2}, {3}, {0, 5}}));
  EXPECT_EQ(c.pattern.size(), 16u + 1u + 4u);
  EXPECT_TRUE(c.pattern.contains(4, 2));
  EXPECT_FALSE(c.pattern.contains(0, 1));
  std::vector<int> sorted = c.permutation;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(sorted, (std::vector<int>{0, 1, 2, 3, 4, 5, 6}));
}

TEST(Pattern, ExtensionIsOneStepAndFixedPointCascades) {
  RealSdp p;
  p.blocks = {{0, 6}};
  p.objective = sym({{{0, 1}, 1.0}});
  p.constraints = {{sym({{{0, 1}, 1.0}, {{2, 3}, 1.0}}), 0.0},
                   {sym({{{2, 3}, 1.0}, {{4, 5}, 1.0}}), 0.0},
                   {sym({{{0, 4}, 1.0}}), 0.0},
                   {sym({{{0, 0}, 1.0}, {{1, 1}, 1.0}}), 1.0}};
  const Extension e = extend_sparsity(base_sparsity(p.objective, 6), p.constraints);
  EXPECT_EQ(e.touched, (std::vector<int>{0, 3}));
  EXPECT_TRUE(e.pattern.contains(3, 2));
  EXPECT_FALSE(e.pattern.contains(4, 5));

  const EffectiveSparsity eff = effective_sparsity(p.objective, p.constraints, 6);
  EXPECT_EQ(eff.iterations, 3);
  EXPECT_TRUE(eff.pattern.contains(5, 4));
  EXPECT_FALSE(eff.pattern.contains(0, 4));

  const auto r = reduce_problem(p);
  EXPECT_EQ(r.iterations, eff.iterations);
  EXPECT_EQ(r.pattern(), eff.pattern);
  EXPECT_EQ(r.kept_constraints, (std::vector<std::int64_t>{0, 1, 3}));
  EXPECT_EQ(r.discarded_constraints, (std::vector<std::int64_t>{2}));
  EXPECT_TRUE(r.exact);
  EXPECT_EQ(r.kept_variables, 12);
  EXPECT_EQ(r.block_size_histogram(), (std::map<int, int>{{2, 3}}));
}

TEST(Reducer, MatchesDenseClosureOnRandomToys) {
  std::mt19937_64 rng(2024);
  int reduced = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const RealSdp p = random_toy(rng);
    const int n = p.dim();
    const auto want = closure_oracle(p);
    SparsityPattern oracle_pattern{n, {}};
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (want[i][j]) oracle_pattern.indices.insert({i, j});
    const EffectiveSparsity eff = effective_sparsity(p.objective, p.constraints, n);
    EXPECT_EQ(eff.pattern, oracle_pattern) << "trial " << trial;
    if (oracle_pattern.size() == static_cast<std::size_t>(n) * n) {
      EXPECT_THROW(reduce_problem(p), NoReduction) << "trial " << trial;
      continue;
    }
    ++reduced;
    const auto r = reduce_problem(p);
    EXPECT_EQ(r.pattern(), oracle_pattern) << "trial " << trial;
    EXPECT_EQ(r.iterations, eff.iterations) << "trial " << trial;
    bool exact = true;
    for (std::int64_t id : r.discarded_constraints) {
      for (const auto& e : p.constraints[static_cast<std::size_t>(id)].matrix)
        EXPECT_FALSE(oracle_pattern.contains(e.row, e.col)) << "trial " << trial;
      exact = exact && p.constraints[static_cast<std::size_t>(id)].rhs == 0.0;
    }
    EXPECT_EQ(r.exact, exact);
    EXPECT_EQ(r.kept_constraints.size() + r.discarded_constraints.size(), p.constraints.size());
    for (std::size_t k = 0; k < r.kept_constraints.size(); ++k)
      EXPECT_EQ(r.reduced.constraints[k].matrix.size(), p.constraints[static_cast<std::size_t>(r.kept_constraints[k])].matrix.size());
  }
  EXPECT_GT(reduced, 50);
}

TEST(Reducer, DroppedInhomogeneousConstraintGivesOuterApproximation) {
  RealSdp p;
  p.blocks = {{0, 4}};
  p.objective = sym({{{0, 0}, 1.0}});
  p.constraints = {{sym({{{0, 0}, 1.0}, {{1, 1}, 1.0}}), 1.0},
                   {sym({{{2, 2}, 1.0}, {{3, 3}, 1.0}}), 1.0},
                   {sym({{{1, 2}, 1.0}}), 1.0}};
  const auto r = reduce_problem(p);
  EXPECT_FALSE(r.exact);
  EXPECT_EQ(r.discarded_constraints, (std::vector<std::int64_t>{2}));
  const double dense = solve(p, tight(2.0)).value;
  const double sparse = solve(r.reduced, tight(2.0)).value;
  EXPECT_NEAR(dense, 0.75, 1e-5);
  EXPECT_NEAR(sparse, 1.0, 1e-5);
}

TEST(Reducer, ReportsAbsenceOfSparsity) {
  RealSdp p;
  p.blocks = {{0, 3}};
  p.objective = sym({{{0, 1}, 1.0}});
  p.constraints = {{sym({{{0, 0}, 1.0}, {{1, 1}, 1.0}, {{2, 2}, 1.0}}), 1.0}};
  EXPECT_EQ(reduce_problem(p).blocks.size(), 2u);
  p.constraints.push_back({sym({{{0, 1}, 1.0}, {{1, 2}, 1.0}}), 0.0});
  EXPECT_THROW(reduce_problem(p), NoReduction);
  RealSdp two = p;
  two.blocks = {{0, 2}, {2, 1}};
  EXPECT_THROW(reduce_problem(two), InvalidArgument);
}

TEST(Reducer, ImplicitSourceMatchesMaterializedProblem) {
  const RelaxationSpec spec{basis_protocol(2), OutcomeSequence::parse("001"), 3, false, Representation::symmetric};
  const RealSdp dense = realify(build_relaxation(spec));
  ASSERT_EQ(dense.realify_mode, RealifyMode::drop_imaginary);
  const auto a = reduce_problem(dense);

  const SymSpace space(16, 3);
  const SymmetricTraceConstraints<double> src(4, 3, false);
  const auto b = reduce_with_source(to_sparse_sym<double>(symmetric_objective(spec, space)), src);

  EXPECT_EQ(as_partition(a.blocks), as_partition(b.blocks));
  EXPECT_EQ(a.pattern(), b.pattern());
  EXPECT_EQ(a.kept_variables, 3566);
  EXPECT_EQ(b.kept_variables, 3566);
  EXPECT_EQ(b.kept_raw_constraints, 2809);
  EXPECT_EQ(a.kept_constraints.size(), b.kept_constraints.size());
  EXPECT_EQ(a.original_raw_constraints, 295937);
  EXPECT_EQ(b.original_raw_constraints, 295937);
  EXPECT_TRUE(a.exact);
  EXPECT_TRUE(b.exact);
  EXPECT_EQ(a.iterations, b.iterations);
}

TEST(Reducer, SparseAndDenseOptimaAgree) {
  struct Case {
    std::string seq;
    int d_E, N;
  };
  for (const Case& c : {Case{"01", 1, 2}, Case{"01", 1, 3}, Case{"001", 1, 3}, Case{"001", 1, 4}, Case{"011", 1, 4},
                        Case{"0", 2, 1}, Case{"01", 2, 2}}) {
    BoundRequest req{basis_protocol(c.d_E), OutcomeSequence::parse(c.seq), c.N};
    req.short_circuit = false;
    req.solve.eps_abs = req.solve.eps_rel = 1e-8;
    req.sparse = false;
    const BoundReport dense = compute_bound(req);
    req.sparse = true;
    const BoundReport sparse = compute_bound(req);
    ASSERT_TRUE(dense.result.has_value()) << c.seq;
    ASSERT_TRUE(sparse.result.has_value()) << c.seq;
    EXPECT_NEAR(sparse.result.value, dense.result.value, 1e-5) << c.seq << " d_E=" << c.d_E << " N=" << c.N;
    if (sparse.reduction) {
      EXPECT_TRUE(sparse.reduction->exact);
    }
  }
}
