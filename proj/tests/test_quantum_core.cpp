#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace envwit;

namespace {

CMatrix apply_unitary_channel(const CMatrix& u, const CMatrix& x) { return u * x * u.adjoint(); }

// Sum over every outcome string of length L.
double total_probability(const MeasurementProtocol& p, const CMatrix& u, int L) {
  double sum = 0.0;
  for (const auto& s : oracle::all_strings(p.alphabet_size(), L))
    sum += sequence_probability(p, u, OutcomeSequence(s, p.alphabet_size()));
  return sum;
}

}  // namespace

TEST(Choi, UnitaryMatchesMapOracle) {
  std::mt19937_64 rng(11);
  for (int d : {2, 3, 4}) {
    const CMatrix u = haar_unitary(d, rng);
    const CMatrix want = oracle::choi_of_map([&](const CMatrix& x) { return apply_unitary_channel(u, x); }, d);
    EXPECT_LT(max_abs(choi_of_unitary(u, false).matrix - want), 1e-12);
    const CMatrix c = choi_of_unitary(u, true).matrix;
    EXPECT_NEAR(c.trace().real(), 1.0, 1e-12);
    EXPECT_LT(max_abs(trace_second(c, d, d) - CMatrix::Identity(d, d) / d), 1e-12);
  }
}

TEST(Choi, RejectsNonUnitary) {
  CMatrix m = CMatrix::Identity(3, 3);
  m(0, 1) = 0.1;
  EXPECT_THROW(choi_of_unitary(m, true), NonUnitaryInput);
}

TEST(Choi, MeasurePrepareMatchesMapOracle) {
  std::mt19937_64 rng(5);
  std::vector<MeasurementProtocol> protocols{basis_protocol(1), basis_protocol(2), oracle::random_protocol(2, 2, 2, rng),
                                             oracle::random_protocol(1, 3, 3, rng)};
  for (const auto& p : protocols)
    for (int a = 0; a < p.alphabet_size(); ++a) {
      auto map = [&](const CMatrix& x) { return apply_measure_prepare(p, a, x); };
      const CMatrix want = oracle::choi_of_map(map, p.d_ES());
      EXPECT_LT(max_abs(measure_prepare_choi(p, a, false).matrix - want), 1e-12);
      const CMatrix last = oracle::choi_of_map([&](const CMatrix& x) {
        CMatrix t(1, 1);
        t(0, 0) = map(x).trace();
        return t;
      }, p.d_ES());
      EXPECT_LT(max_abs(measure_prepare_choi(p, a, true).matrix - last), 1e-12);
    }
}

TEST(Choi, OutcomeOutOfRange) {
  EXPECT_THROW(measure_prepare_choi(basis_protocol(1), 2, false), OutcomeOutOfRange);
  EXPECT_THROW(OutcomeSequence::parse("012", 2), OutcomeOutOfRange);
}

TEST(Protocol, Validation) {
  const CMatrix r = ketbra(2, 0, 0);
  EXPECT_THROW(MeasurementProtocol(2, 1, r, ketbra(1, 0, 0), {ketbra(2, 0, 0)}), InvalidArgument);
  EXPECT_THROW(MeasurementProtocol(2, 1, ketbra(3, 0, 0), ketbra(1, 0, 0), {ketbra(2, 0, 0), ketbra(2, 1, 1)}),
               DimensionMismatch);
  EXPECT_THROW(MeasurementProtocol(2, 1, 2.0 * r, ketbra(1, 0, 0), {ketbra(2, 0, 0), ketbra(2, 1, 1)}), InvalidArgument);
  EXPECT_NO_THROW(basis_protocol(3));
  EXPECT_THROW(OutcomeSequence::parse("0a1"), InvalidArgument);
  EXPECT_THROW(OutcomeSequence::parse(""), InvalidArgument);
  EXPECT_EQ(OutcomeSequence::parse("00101").counts(), (std::vector<int>{3, 2}));
}

TEST(Probability, ChoiContractionMatchesOperational) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 6; ++trial) {
    const MeasurementProtocol p = trial % 2 ? oracle::random_protocol(2, 2, 2, rng) : basis_protocol(1 + trial / 2);
    const CMatrix u = haar_unitary(p.d_ES(), rng);
    for (const char* s : {"0", "01", "001", "0110"}) {
      const OutcomeSequence seq = OutcomeSequence::parse(s);
      const ObjectiveOperator x = build_objective(p, seq);
      EXPECT_NEAR(sequence_probability_choi(x, u), sequence_probability(p, u, seq), 1e-12) << s;
    }
  }
}

TEST(Probability, DenseObjectiveMatchesContraction) {
  std::mt19937_64 rng(23);
  const MeasurementProtocol p = oracle::random_protocol(1, 2, 2, rng);
  const CMatrix u = haar_unitary(2, rng);
  const OutcomeSequence seq = OutcomeSequence::parse("011");
  const ObjectiveOperator x = build_objective(p, seq);
  const CMatrix c = choi_of_unitary(u, true).matrix;
  const CMatrix cl = kron(kron(c, c), c);
  const cplx dense = (x.dense().transpose() * cl).trace();
  EXPECT_NEAR(dense.real(), sequence_probability(p, u, seq), 1e-12);
  EXPECT_NEAR(dense.imag(), 0.0, 1e-12);

  // entries enumerated one by one rebuild the dense operator
  CMatrix rebuilt = CMatrix::Zero(x.dim(), x.dim());
  for (const auto& e : x.nonzeros()) {
    int r = 0, col = 0;
    for (int l = 0; l < x.L(); ++l) {
      r = r * 4 + e.row[static_cast<std::size_t>(l)];
      col = col * 4 + e.col[static_cast<std::size_t>(l)];
    }
    rebuilt(r, col) += e.value;
  }
  EXPECT_LT(max_abs(rebuilt - x.dense()), 1e-12);
}

TEST(Probability, OutcomeStringsSumToOne) {
  std::mt19937_64 rng(3);
  const MeasurementProtocol p = oracle::random_protocol(2, 3, 3, rng);
  EXPECT_NEAR(total_probability(p, haar_unitary(p.d_ES(), rng), 3), 1.0, 1e-12);
}

TEST(Probability, WitnessUnitaryGivesCertainty) {
  const CMatrix u = oracle::witness_unitary();
  ASSERT_TRUE(is_unitary(u));
  const MeasurementProtocol p = basis_protocol(3);
  EXPECT_NEAR(sequence_probability(p, u, OutcomeSequence::parse("001")), 1.0, 1e-12);
  EXPECT_NEAR(sequence_probability_choi(build_objective(p, OutcomeSequence::parse("001")), u), 1.0, 1e-12);
}

TEST(Probability, RejectsWrongUnitaryShape) {
  EXPECT_THROW(sequence_probability(basis_protocol(2), CMatrix::Identity(3, 3), OutcomeSequence::parse("01")),
               DimensionMismatch);
}

TEST(Dilation, CyclicKrausInstrument) {
  CMatrix k0 = CMatrix::Zero(3, 3), k1 = CMatrix::Zero(3, 3);
  k0(1, 0) = 1.0;
  k0(2, 1) = 1.0;
  k1(0, 2) = 1.0;
  const std::vector<CMatrix> kraus{k0, k1};
  const CMatrix u = dilate_kraus(kraus, 2);
  ASSERT_TRUE(is_unitary(u));
  std::mt19937_64 rng(9);
  const CMatrix rho = random_density(3, rng);
  const CMatrix full = u * kron(rho, ketbra(2, 0, 0)) * u.adjoint();
  for (int a = 0; a < 2; ++a) {
    const CMatrix out = trace_second(full * kron(CMatrix::Identity(3, 3), ketbra(2, a, a)), 3, 2);
    EXPECT_LT(max_abs(out - kraus[a] * rho * kraus[a].adjoint()), 1e-12);
  }
}

TEST(Dilation, Errors) {
  EXPECT_THROW(dilate_kraus({}, 2), NotAnInstrument);
  const CMatrix half = CMatrix::Identity(2, 2) / std::sqrt(2.0);
  EXPECT_THROW(dilate_kraus({half, half, CMatrix::Zero(2, 2)}, 2), TooManyOutcomes);
  EXPECT_THROW(dilate_kraus({half}, 2), NotAnInstrument);
}

TEST(Linalg, UnitaryLogRoundTrip) {
  std::mt19937_64 rng(31);
  for (int d : {2, 4, 6}) {
    const CMatrix u = haar_unitary(d, rng);
    const CMatrix h = unitary_log(u);
    EXPECT_TRUE(is_hermitian(h));
    EXPECT_LT(max_abs(expi_hermitian(h) - u), 1e-10);
  }
  EXPECT_LT(max_abs(expi_hermitian(unitary_log(oracle::witness_unitary())) - oracle::witness_unitary()), 1e-10);
}

TEST(TomlIo, ProtocolRoundTrip) {
  std::mt19937_64 rng(41);
  const MeasurementProtocol p = oracle::random_protocol(2, 2, 2, rng);
  const MeasurementProtocol q = protocol_from_toml(protocol_to_toml(p));
  EXPECT_EQ(q.d_S(), 2);
  EXPECT_EQ(q.d_E(), 2);
  EXPECT_EQ(max_abs(q.rho_S0() - p.rho_S0()), 0.0);
  for (int a = 0; a < 2; ++a) EXPECT_EQ(max_abs(q.effect(a) - p.effect(a)), 0.0);
}

TEST(TomlIo, UnitaryRoundTripAndErrors) {
  const CMatrix u = oracle::witness_unitary();
  EXPECT_EQ(max_abs(unitary_from_toml(unitary_to_toml(u, "001", 1.0)) - u), 0.0);
  EXPECT_THROW(unitary_from_toml("unitary = [[[1.0, 0.0], [0.0, 0.0]], [[1.0, 0.0], [0.0, 0.0]]]"), NonUnitaryInput);
  EXPECT_THROW(unitary_from_toml("unitary = [[1.0]]"), IoError);
  EXPECT_THROW(unitary_from_toml("unitary = ["), IoError);
  EXPECT_THROW(protocol_from_toml("d_S = 2"), IoError);
  EXPECT_THROW(load_unitary("/nonexistent/u.toml"), IoError);
}
