#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace envwit;

namespace {

SolveConfig tight(double trace) {
  SolveConfig c;
  c.eps_abs = c.eps_rel = 1e-8;
  c.trace_bound = trace;
  return c;
}

BoundResult solve_relaxation(const RelaxationSpec& spec) {
  const RealSdp p = realify(build_relaxation(spec));
  const double blocks = spec.ppt ? 1.0 + spec.N / 2 : 1.0;
  return solve(p, tight(blocks * (p.realify_mode == RealifyMode::embed ? 2.0 : 1.0)));
}

RelaxationSpec spec_for(const std::string& seq, int d_E, int N, bool ppt = false,
                        Representation rep = Representation::symmetric) {
  if (ppt) rep = Representation::full_space;
  return {basis_protocol(d_E), OutcomeSequence::parse(seq), N, ppt, rep};
}

// Block-diagonal value <C, diag(blocks)>.
cplx inner(const SparseSym<cplx>& c, const std::vector<CMatrix>& blocks) {
  cplx s = 0.0;
  for (const auto& e : c) {
    int r = e.row, col = e.col;
    for (const CMatrix& b : blocks) {
      if (r < b.rows()) {
        s += std::conj(e.value) * b(r, col);
        break;
      }
      r -= static_cast<int>(b.rows());
      col -= static_cast<int>(b.rows());
    }
  }
  return s;
}

CMatrix kron_power(const CMatrix& c, int n) {
  CMatrix out = c;
  for (int k = 1; k < n; ++k) out = kron(out, c);
  return out;
}

}  // namespace

TEST(RelaxationSpec, RejectsBadCombinations) {
  EXPECT_THROW(build_relaxation(spec_for("001", 1, 2)), InvalidArgument);
  RelaxationSpec s = spec_for("01", 1, 2);
  s.ppt = true;
  EXPECT_THROW(build_relaxation(s), InvalidArgument);
  const RelaxationSpec wide{basis_protocol(1), OutcomeSequence::parse("02"), 2, false, Representation::symmetric};
  EXPECT_THROW(build_relaxation(wide), DimensionMismatch);
  BuildOptions tiny;
  tiny.max_variables = 50;
  EXPECT_THROW(build_relaxation(spec_for("01", 1, 2), tiny), IntractableSize);
}

TEST(SymmetricConstraints, CountsForQubitEnvironment) {
  const SymmetricTraceConstraints<double> src(4, 3, false);
  EXPECT_EQ(src.dim(), 816);
  EXPECT_EQ(static_cast<std::int64_t>(src.dim()) * src.dim(), 665856);
  EXPECT_EQ(src.raw_size(), 295937);
  EXPECT_EQ(src.key_count(), 544);
  const SymmetricTraceConstraints<double> src4(4, 4, false);
  EXPECT_EQ(static_cast<std::int64_t>(src4.dim()) * src4.dim(), 15023376);
  EXPECT_EQ(src4.raw_size(), 10653697);
}

TEST(SymmetricConstraints, DecodeInvertsPairIndex) {
  for (bool imag : {false, true}) {
    const SymmetricTraceConstraints<cplx> src(2, 3, imag);
    std::int64_t id = 1;
    for (std::int64_t p = 0; p < src.key_count(); ++p)
      for (std::int64_t q = p; q < src.key_count(); ++q)
        for (int part = 0; part < (imag ? 2 : 1); ++part, ++id) {
          const auto d = src.decode(id);
          EXPECT_EQ(d.p, p);
          EXPECT_EQ(d.q, q);
          EXPECT_EQ(d.part, part);
        }
    EXPECT_EQ(id, src.size());
  }
}

TEST(SymmetricConstraints, TouchingMatchesMaterializedSupport) {
  const SymmetricTraceConstraints<cplx> src(2, 2, true);
  std::map<std::pair<int, int>, std::vector<std::int64_t>> want;
  for (std::int64_t id = 0; id < src.size(); ++id)
    for (const auto& rc : support(src.get(id).matrix)) {
      auto& v = want[{std::min(rc.first, rc.second), std::max(rc.first, rc.second)}];
      if (v.empty() || v.back() != id) v.push_back(id);
    }
  for (int a = 0; a < src.dim(); ++a)
    for (int b = a; b < src.dim(); ++b) {
      std::vector<std::int64_t> ids;
      src.touching(a, b, ids);
      std::sort(ids.begin(), ids.end());
      EXPECT_EQ(ids, want[std::make_pair(a, b)]) << a << "," << b;
    }
}

// Any U gives the feasible point (C_U)^{(x)N}; every equality must hold on it.
TEST(Feasibility, WitnessUnitaryOnSymmetricSpace) {
  const CMatrix u = oracle::witness_unitary();
  for (const std::string seq : {"0", "00"}) {
    const RelaxationSpec spec{basis_protocol(3), OutcomeSequence::parse(seq), 2, false, Representation::symmetric};
    const ComplexSdp p = build_relaxation(spec);
    const SymSpace space(36, 2);
    const CVector w = oracle::tensor_power_coordinates(u, space);
    double worst = 0.0;
    for (const auto& c : p.constraints) worst = std::max(worst, std::abs(oracle::rank_one_inner(c.matrix, w) - c.rhs));
    EXPECT_LT(worst, 1e-9);
    EXPECT_NEAR(oracle::rank_one_inner(p.objective, w).real(), 1.0, 1e-9);
  }
}

TEST(Feasibility, RandomUnitaryOnSymmetricSpace) {
  std::mt19937_64 rng(11);
  const MeasurementProtocol proto = oracle::random_protocol(2, 2, 2, rng);
  const OutcomeSequence seq = OutcomeSequence::parse("01");
  const CMatrix u = haar_unitary(4, rng);
  for (int N : {2, 3}) {
    const SymSpace space(16, N);
    const CVector w = oracle::tensor_power_coordinates(u, space);
    const SymmetricTraceConstraints<cplx> src(4, N, true);
    double worst = 0.0;
    for (std::int64_t id = 0; id < src.size(); id += N == 2 ? 1 : 37) {
      const auto c = src.get(id);
      worst = std::max(worst, std::abs(oracle::rank_one_inner(c.matrix, w) - c.rhs));
    }
    EXPECT_LT(worst, 1e-9) << "N=" << N;
    const RelaxationSpec spec{proto, seq, N, false, Representation::symmetric};
    EXPECT_NEAR(oracle::rank_one_inner(to_sparse_sym<cplx>(symmetric_objective(spec, space)), w).real(),
                sequence_probability(proto, u, seq), 1e-10);
  }
}

TEST(Feasibility, FullSpaceWithPartialTranspose) {
  std::mt19937_64 rng(5);
  const CMatrix u = haar_unitary(2, rng);
  const CMatrix c = choi_of_unitary(u, true).matrix;
  const RelaxationSpec spec = spec_for("001", 1, 3, true);
  const ComplexSdp p = build_relaxation(spec);
  ASSERT_EQ(p.blocks.size(), 2u);
  const std::vector<CMatrix> x{kron_power(c, 3), kron(CMatrix(c.transpose()), kron_power(c, 2))};
  double worst = 0.0;
  for (const auto& k : p.constraints) worst = std::max(worst, std::abs(inner(k.matrix, x) - k.rhs));
  EXPECT_LT(worst, 1e-12);
  EXPECT_NEAR(inner(p.objective, x).real(), sequence_probability(spec.protocol, u, spec.seq), 1e-12);
}

TEST(Realify, DropsImaginaryForRealDataAndEmbedsOtherwise) {
  const ComplexSdp real = build_relaxation(spec_for("01", 1, 2));
  EXPECT_LE(max_imag(real), kRealTol);
  EXPECT_EQ(realify(real).realify_mode, RealifyMode::drop_imaginary);
  EXPECT_EQ(realify(real, true).realify_mode, RealifyMode::embed);

  std::mt19937_64 rng(3);
  const RelaxationSpec spec{oracle::random_protocol(1, 2, 2, rng), OutcomeSequence::parse("01"), 2, false,
                            Representation::symmetric};
  const ComplexSdp cp = build_relaxation(spec);
  EXPECT_GT(max_imag(cp), kRealTol);
  const RealSdp emb = realify(cp);
  EXPECT_EQ(emb.realify_mode, RealifyMode::embed);
  EXPECT_EQ(emb.blocks[0].size, 2 * cp.blocks[0].size);

  const auto direct = solve(cp, tight(1.0));
  const auto embedded = solve(emb, tight(2.0));
  ASSERT_TRUE(direct.has_value());
  ASSERT_TRUE(embedded.has_value());
  EXPECT_NEAR(direct.value, embedded.value, 1e-5);
}

TEST(Realify, UnembedInvertsEmbedding) {
  std::mt19937_64 rng(9);
  const CMatrix a = random_density(3, rng);
  RMatrix x(6, 6);
  x << a.real(), -a.imag(), a.imag(), a.real();
  EXPECT_LT(max_abs(unembed(x) - a), 1e-15);
}

TEST(DeFinetti, HandSubstitutionAndMonotonicity) {
  EXPECT_DOUBLE_EQ(definetti_error_bound(3, 4, 3), 120.0 / 19.0);
  for (int N = 3; N < 40; ++N) EXPECT_GT(definetti_error_bound(3, 4, N), definetti_error_bound(3, 4, N + 1));
  EXPECT_LT(definetti_error_bound(2, 2, 2), definetti_error_bound(3, 2, 3));
  EXPECT_THROW(definetti_error_bound(3, 4, 2), InvalidArgument);
}

TEST(QubitProbeTrivialEnvironment, MatchesClosedForms) {
  struct Row {
    std::string seq;
    int N;
    bool ppt;
    double want;
  };
  const Row rows[] = {{"01", 2, false, 0.5},     {"01", 2, true, 0.25},     {"01", 3, false, 0.25},
                      {"001", 3, true, 4.0 / 27}, {"001", 4, false, 4.0 / 27}, {"010", 4, false, 4.0 / 27},
                      {"00", 2, false, 1.0}};
  for (const Row& r : rows) {
    const BoundResult b = solve_relaxation(spec_for(r.seq, 1, r.N, r.ppt));
    ASSERT_TRUE(b.has_value()) << r.seq;
    EXPECT_NEAR(b.value, r.want, 1e-4) << r.seq << " N=" << r.N << " ppt=" << r.ppt;
    EXPECT_GE(b.safe_value, r.want - 1e-9) << r.seq;
  }
}

TEST(QubitProbeTrivialEnvironment, RepresentationsAgree) {
  for (const std::string seq : {"01", "001"}) {
    const int N = static_cast<int>(seq.size());
    const double sym = solve_relaxation(spec_for(seq, 1, N)).value;
    const double full = solve_relaxation(spec_for(seq, 1, N, false, Representation::full_space)).value;
    EXPECT_NEAR(sym, full, 1e-5) << seq;
  }
}

TEST(Hierarchy, MonotoneAndAbovePptAndSound) {
  const double eps = 1e-6;
  std::mt19937_64 rng(21);
  for (const std::string seq : {"01", "011"}) {
    const int L = static_cast<int>(seq.size());
    double prev = 2.0;
    for (int N = L; N <= 4; ++N) {
      const BoundResult b = solve_relaxation(spec_for(seq, 1, N));
      ASSERT_TRUE(b.has_value());
      EXPECT_LE(b.value, prev + 2 * eps) << seq << " N=" << N;
      prev = b.value;
      for (int k = 0; k < 5; ++k)
        EXPECT_LE(sequence_probability(basis_protocol(1), haar_unitary(2, rng), OutcomeSequence::parse(seq)),
                  b.safe_value);
    }
    const double with_ppt = solve_relaxation(spec_for(seq, 1, L, true)).value;
    const double without = solve_relaxation(spec_for(seq, 1, L)).value;
    EXPECT_LE(with_ppt, without + 2 * eps) << seq;
  }
}
