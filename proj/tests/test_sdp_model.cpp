#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include "envwit/envwit.hpp"

using namespace envwit;

namespace {

// max <F, X> s.t. Tr X = 1 over one n-block: the largest eigenvalue of F.
template <class Scalar>
SdpProblem<Scalar> eigen_toy(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& f) {
  SdpProblem<Scalar> p;
  const int n = static_cast<int>(f.rows());
  p.blocks = {{0, n}};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (f(i, j) != Scalar(0)) p.objective.push_back({i, j, f(i, j)});
  Constraint<Scalar> tr;
  for (int i = 0; i < n; ++i) tr.matrix.push_back({i, i, Scalar(1)});
  tr.rhs = 1.0;
  p.constraints.push_back(tr);
  return p;
}

SolveConfig tight() {
  SolveConfig c;
  c.eps_abs = c.eps_rel = 1e-9;
  c.trace_bound = 1.0;
  return c;
}

}  // namespace

TEST(Validate, ReportsMalformedProblems) {
  RealSdp p;
  EXPECT_FALSE(validate(p).empty());
  p.blocks = {{0, 2}, {2, 1}};
  p.objective = {{0, 2, 1.0}, {2, 0, 1.0}};
  auto d = validate(p);
  ASSERT_FALSE(d.empty());
  EXPECT_NE(d.front().find("couples distinct blocks"), std::string::npos);
  p.objective = {{0, 1, 1.0}};
  d = validate(p);
  ASSERT_FALSE(d.empty());
  EXPECT_NE(d.front().find("not Hermitian"), std::string::npos);
  p.objective = {{0, 5, 1.0}};
  EXPECT_FALSE(validate(p).empty());
  p.objective = {{0, 1, 1.0}, {1, 0, 1.0}};
  EXPECT_TRUE(validate(p).empty());
  p.blocks = {{0, 2}, {3, 1}};
  EXPECT_FALSE(validate(p).empty());
}

TEST(Solve, LargestEigenvalueToy) {
  RMatrix f(2, 2);
  f << 1, 2, 2, 3;
  const auto out = solve_full(eigen_toy<double>(f), tight());
  EXPECT_EQ(out.result.status, SolverStatus::optimal);
  EXPECT_NEAR(out.result.value, 2.0 + std::sqrt(5.0), 1e-6);
  EXPECT_GE(out.result.certified_value, 2.0 + std::sqrt(5.0) - 1e-9);
  EXPECT_GE(out.result.safe_value, out.result.value);
  ASSERT_EQ(out.blocks.size(), 1u);
  EXPECT_NEAR(out.blocks[0].trace(), 1.0, 1e-6);
}

TEST(Solve, ScalarBlocksUseLinearCone) {
  RealSdp p;
  p.blocks = {{0, 1}, {1, 1}, {2, 2}};
  p.objective = {{0, 0, 1.0}, {1, 1, 2.0}, {2, 3, 0.5}, {3, 2, 0.5}};
  p.constraints.push_back({{{0, 0, 1.0}, {1, 1, 1.0}, {2, 2, 1.0}, {3, 3, 1.0}}, 1.0});
  const auto r = solve(p, tight());
  EXPECT_EQ(r.status, SolverStatus::optimal);
  EXPECT_NEAR(r.value, 2.0, 1e-6);
}

TEST(Solve, ComplexConeMatchesRealEmbedding) {
  CMatrix f(2, 2);
  f << 0, cplx(0, -1), cplx(0, 1), 0.5;
  const double want = Eigen::SelfAdjointEigenSolver<CMatrix>(f).eigenvalues().maxCoeff();
  const ComplexSdp p = eigen_toy<cplx>(f);
  const auto direct = solve_full(p, tight());
  const RealSdp r = realify(p);
  EXPECT_EQ(r.realify_mode, RealifyMode::embed);
  SolveConfig c = tight();
  c.trace_bound = 2.0;
  const auto embedded = solve_full(r, c);
  EXPECT_NEAR(direct.result.value, want, 1e-6);
  EXPECT_NEAR(embedded.result.value, want, 1e-6);
  const CMatrix x = unembed(embedded.blocks[0]);
  EXPECT_NEAR((f * x).trace().real(), want, 1e-5);
  EXPECT_NEAR((f * direct.blocks[0]).trace().real(), want, 1e-5);
}

TEST(Solve, InfeasibleAndUnbounded) {
  RealSdp bad;
  bad.blocks = {{0, 1}};
  bad.objective = {{0, 0, 1.0}};
  bad.constraints = {{{{0, 0, 1.0}}, 1.0}, {{{0, 0, 1.0}}, 2.0}};
  EXPECT_EQ(solve(bad).status, SolverStatus::infeasible);

  RealSdp open;
  open.blocks = {{0, 2}};
  open.objective = {{1, 1, 1.0}};
  open.constraints = {{{{0, 0, 1.0}}, 1.0}};
  EXPECT_EQ(solve(open).status, SolverStatus::unbounded);
}

TEST(Solve, RejectsInvalidProblemAndUnknownSolver) {
  RealSdp p;
  p.blocks = {{0, 2}};
  p.objective = {{0, 1, 1.0}};
  EXPECT_THROW(solve(p), InvalidArgument);
  RMatrix f = RMatrix::Identity(2, 2);
  setenv("ENVWIT_SOLVER", "mosek", 1);
  EXPECT_THROW(solve(eigen_toy<double>(f)), SolverUnavailable);
  unsetenv("ENVWIT_SOLVER");
  EXPECT_NO_THROW(solve(eigen_toy<double>(f)));
}

TEST(Sdpa, RoundTripIsExact) {
  RealSdp p;
  p.blocks = {{0, 2}, {2, 1}};
  p.objective = {{0, 1, 0.1}, {1, 0, 0.1}, {2, 2, -1.0 / 3.0}};
  p.constraints.push_back({{{0, 0, 1.0}, {1, 1, 1.0}, {2, 2, 1.0}}, 1.0});
  p.constraints.push_back({{{0, 1, std::sqrt(2.0)}, {1, 0, std::sqrt(2.0)}}, 0.0});
  std::stringstream ss;
  write_sdpa(p, ss);
  const RealSdp q = read_sdpa(ss);
  ASSERT_EQ(q.blocks.size(), 2u);
  EXPECT_EQ(q.blocks[0].size, 2);
  EXPECT_EQ(q.blocks[1].size, 1);
  ASSERT_EQ(q.constraints.size(), 2u);
  auto dense = [](const SparseSym<double>& m) {
    RMatrix d = RMatrix::Zero(3, 3);
    for (const auto& e : m) d(e.row, e.col) += e.value;
    return d;
  };
  EXPECT_EQ(dense(q.objective), dense(p.objective));
  for (int k = 0; k < 2; ++k) {
    EXPECT_EQ(dense(q.constraints[k].matrix), dense(p.constraints[k].matrix));
    EXPECT_EQ(q.constraints[k].rhs, p.constraints[k].rhs);
  }
  EXPECT_NEAR(solve(q, tight()).value, solve(p, tight()).value, 1e-9);
}

TEST(Sdpa, ParsesDecoratedInput) {
  const std::string text =
      "\"a comment\n* another\n2 =mDIM\n1 = nBLOCK\n{2}\n{1.0, 0.0}\n"
      "0 1 1 2 1.0\n1 1 1 1 1.0\n1 1 2 2 1.0\n2 1 1 2 0.5\n";
  std::istringstream in(text);
  const RealSdp p = read_sdpa(in);
  ASSERT_EQ(p.constraints.size(), 2u);
  EXPECT_EQ(p.blocks[0].size, 2);
  EXPECT_EQ(p.objective.size(), 2u);
  EXPECT_EQ(p.constraints[1].matrix.size(), 2u);
  EXPECT_TRUE(validate(p).empty());

  std::istringstream broken("1\n1\n2\n1.0\n0 3 1 1 1.0\n");
  EXPECT_THROW(read_sdpa(broken), IoError);
  std::istringstream outside("1\n1\n2\n1.0\n0 1 3 1 1.0\n");
  EXPECT_THROW(read_sdpa(outside), IoError);
}

TEST(Sdpa, ComplexProblemsMustBeRealified) {
  ComplexSdp p;
  p.blocks = {{0, 1}};
  EXPECT_THROW(export_sdpa(p, "/tmp/never.dat-s"), ComplexNotRealified);
  RealSdp bad;
  EXPECT_THROW(export_sdpa(bad, "/tmp/never.dat-s"), InvalidArgument);
}

TEST(Json, BoundResultRoundTrip) {
  BoundResult r;
  r.value = 0.25;
  r.safe_value = 0.2500001;
  r.N = 3;
  r.ppt = true;
  r.status = SolverStatus::near_optimal;
  r.solver = "scs";
  const BoundResult q = bound_from_json(to_json(r));
  EXPECT_EQ(q.value, r.value);
  EXPECT_EQ(q.safe_value, r.safe_value);
  EXPECT_EQ(q.status, r.status);
  EXPECT_TRUE(std::isnan(q.certified_value));
  auto j = to_json(r);
  j["schema_version"] = 99;
  EXPECT_THROW(bound_from_json(j), IoError);
}
