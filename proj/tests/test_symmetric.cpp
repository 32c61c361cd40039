#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace envwit;

TEST(SymSpace, SizesMatchBinomials) {
  EXPECT_EQ(SymSpace(16, 2).size(), 136);
  EXPECT_EQ(SymSpace(16, 3).size(), 816);
  EXPECT_EQ(SymSpace(16, 4).size(), 3876);
  EXPECT_EQ(SymSpace(4, 2).size(), 10);
  EXPECT_EQ(SymSpace(3, 0).size(), 1);
  EXPECT_EQ(type_count_exact(36, 3), BigInt(8436));
}

TEST(SymSpace, IndexIsColexBijection) {
  for (auto [d, n] : {std::pair{4, 3}, std::pair{3, 5}, std::pair{16, 2}, std::pair{1, 4}}) {
    const SymSpace s(d, n);
    for (int k = 0; k < s.size(); ++k) {
      EXPECT_EQ(s.index_of(s.type(k)), k);
      EXPECT_EQ(s.type(k).total(), n);
      if (k > 0) EXPECT_TRUE(s.type(k - 1).colex_less(s.type(k)));
    }
  }
}

TEST(SymSpace, MultinomialCountsStrings) {
  const SymSpace s(3, 4);
  std::vector<int> count(static_cast<std::size_t>(s.size()), 0);
  for (const auto& str : oracle::all_strings(3, 4)) {
    std::vector<int> c(3, 0);
    for (int x : str) ++c[static_cast<std::size_t>(x)];
    ++count[static_cast<std::size_t>(s.index_of(TypeVector(c)))];
  }
  for (int k = 0; k < s.size(); ++k) {
    EXPECT_EQ(multinomial(s.type(k)), BigInt(count[static_cast<std::size_t>(k)]));
    EXPECT_DOUBLE_EQ(s.mult(k), count[static_cast<std::size_t>(k)]);
  }
}

TEST(SymSpace, MultinomialIsExactBeyondDoubles) {
  TypeVector t({30, 30, 30});
  // 90! / (30!)^3 has 41 digits
  EXPECT_EQ(multinomial(t).str().size(), 41u);
  EXPECT_THROW(to_int64(multinomial(t), "x"), Overflow);
}

TEST(SplitType, VandermondeIdentity) {
  const SymSpace s(4, 5);
  for (int k = 0; k < s.size(); k += 7) {
    const TypeVector& t = s.type(k);
    for (int first = 0; first <= 5; ++first) {
      BigInt sum = 0;
      for (const auto& parts : split_type(t, {first, 5 - first})) {
        EXPECT_EQ(parts[0] + parts[1], t);
        sum += multinomial(parts[0]) * multinomial(parts[1]);
      }
      EXPECT_EQ(sum, multinomial(t)) << "type " << k << " split " << first;
    }
  }
}

TEST(SplitType, ThreeWaySplitsCountCompositions) {
  const TypeVector t({2, 1, 1});
  const auto splits = split_type(t, {1, 2, 1});
  BigInt strings = 0;
  for (const auto& p : splits) strings += multinomial(p[0]) * multinomial(p[1]) * multinomial(p[2]);
  EXPECT_EQ(strings, BigInt(12));
  EXPECT_THROW(split_type(t, {1, 1}), SizeMismatch);
}

TEST(SinglePartyDecompose, MatchesDenseVectors) {
  const int dES = 2, n = 3;
  const SymSpace full(4, n), rest(4, n - 1);
  const CMatrix v = oracle::symmetric_isometry(full);
  const CMatrix w = oracle::symmetric_isometry(rest);
  for (int t = 0; t < full.size(); ++t) {
    CVector rebuilt = CVector::Zero(v.cols());
    double norm = 0.0;
    for (const auto& term : single_party_decompose(full.type(t), dES)) {
      const int u = term.i * dES + term.o;
      CVector e = CVector::Zero(4);
      e(u) = 1.0;
      rebuilt += term.norm_weight * kron(e, w.row(rest.index_of(term.s)).transpose());
      norm += term.norm_weight * term.norm_weight;
    }
    EXPECT_NEAR(norm, 1.0, 1e-14);
    EXPECT_LT((rebuilt - v.row(t).transpose()).norm(), 1e-12);
  }
  EXPECT_THROW(single_party_decompose(TypeVector::zero(4), 2), EmptyType);
  EXPECT_THROW(single_party_decompose(TypeVector({1, 0, 0}), 2), DimensionMismatch);
}

TEST(SymmetricBasis, OrthonormalAndSpansSymmetrizerRange) {
  for (int n = 1; n <= 3; ++n) {
    const SymSpace s(4, n);
    const CMatrix v = oracle::symmetric_isometry(s);
    EXPECT_LT(max_abs(v * v.adjoint() - CMatrix::Identity(s.size(), s.size())), 1e-12) << n;
    EXPECT_LT(max_abs(v.adjoint() * v - oracle::symmetrizer(4, n)), 1e-12) << n;
  }
}

namespace {

void check_projection(const MeasurementProtocol& p, const char* seq_text, int N) {
  const OutcomeSequence seq = OutcomeSequence::parse(seq_text);
  const ObjectiveOperator x = build_objective(p, seq);
  const int q = p.d_ES() * p.d_ES();
  const SymSpace s(q, N);
  const CMatrix v = oracle::symmetric_isometry(s);
  int tail = 1;
  for (int k = seq.length(); k < N; ++k) tail *= q;
  const CMatrix full = kron(x.dense().transpose(), CMatrix::Identity(tail, tail));
  const CMatrix want = v * full * v.adjoint();
  const CMatrix got = CMatrix(project_objective(x, N, s));
  EXPECT_LT(max_abs(got - want), 1e-12) << seq_text << " N=" << N;
}

}  // namespace

TEST(ProjectObjective, MatchesDenseSandwich) {
  check_projection(basis_protocol(1), "01", 2);
  check_projection(basis_protocol(1), "01", 3);
  check_projection(basis_protocol(1), "001", 3);
  std::mt19937_64 rng(2);
  check_projection(oracle::random_protocol(1, 2, 2, rng), "10", 3);
}

TEST(ProjectObjective, TensorPowerGivesSequenceProbability) {
  std::mt19937_64 rng(8);
  const MeasurementProtocol p = basis_protocol(2);
  const OutcomeSequence seq = OutcomeSequence::parse("001");
  const ObjectiveOperator x = build_objective(p, seq);
  for (int N : {3, 4}) {
    const SymSpace s(16, N);
    const SparseC f = project_objective(x, N, s);
    const CMatrix u = haar_unitary(4, rng);
    const CVector w = oracle::tensor_power_coordinates(u, s);
    const cplx val = w.dot(f * w);
    EXPECT_NEAR(val.real(), sequence_probability(p, u, seq), 1e-12);
    EXPECT_NEAR(w.squaredNorm(), 1.0, 1e-12);
  }
}

TEST(ProjectObjective, RejectsMismatchedSpace) {
  const ObjectiveOperator x = build_objective(basis_protocol(1), OutcomeSequence::parse("001"));
  EXPECT_THROW(project_objective(x, 2, SymSpace(4, 2)), DimensionMismatch);
  EXPECT_THROW(project_objective(x, 3, SymSpace(9, 3)), DimensionMismatch);
}
