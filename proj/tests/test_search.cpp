#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace envwit;

namespace {

double prob_at(const MeasurementProtocol& p, const OutcomeSequence& seq, const RVector& x) {
  return sequence_probability(p, expi_hermitian(hermitian_from_params(x, p.d_ES())), seq);
}

}  // namespace

TEST(Parametrization, RoundTripsHermitianMatrices) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  RVector x(16);
  for (auto& v : x) v = g(rng);
  const CMatrix h = hermitian_from_params(x, 4);
  EXPECT_TRUE(is_hermitian(h));
  EXPECT_LT((params_from_hermitian(h) - x).norm(), 1e-15);
  EXPECT_THROW(hermitian_from_params(RVector::Zero(5), 2), SizeMismatch);
}

TEST(Gradient, MatchesCentralDifferences) {
  std::mt19937_64 rng(17);
  struct Case {
    MeasurementProtocol p;
    std::string seq;
  };
  std::vector<Case> cases{{basis_protocol(2), "001"}, {basis_protocol(2), "0110"}, {basis_protocol(1), "01"}};
  cases.push_back({oracle::random_protocol(2, 2, 2, rng), "010"});
  cases.push_back({oracle::random_protocol(1, 3, 3, rng), "021"});
  for (const Case& c : cases) {
    const OutcomeSequence seq = OutcomeSequence::parse(c.seq, c.p.alphabet_size());
    for (int trial = 0; trial < 3; ++trial) {
      const RVector x = random_parameters(c.p.d_ES(), 99, trial);
      double v = 0.0;
      const RVector g = probability_gradient(c.p, seq, x, &v);
      EXPECT_NEAR(v, prob_at(c.p, seq, x), 1e-12);
      RVector fd(x.size());
      const double h = 1e-6;
      for (Eigen::Index k = 0; k < x.size(); ++k) {
        RVector a = x, b = x;
        a(k) += h;
        b(k) -= h;
        fd(k) = (prob_at(c.p, seq, a) - prob_at(c.p, seq, b)) / (2 * h);
      }
      EXPECT_LE((g - fd).norm(), 1e-5 * std::max(fd.norm(), 1e-3)) << c.seq << " trial " << trial;
    }
  }
}

TEST(Gradient, HandlesDegenerateSpectrum) {
  const MeasurementProtocol p = basis_protocol(2);
  const OutcomeSequence seq = OutcomeSequence::parse("001");
  RVector x = RVector::Zero(16);
  x(0) = x(1) = 0.3;
  x(4) = 0.2;
  const RVector g = probability_gradient(p, seq, x);
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    RVector a = x, b = x;
    a(k) += 1e-6;
    b(k) -= 1e-6;
    EXPECT_NEAR(g(k), (prob_at(p, seq, a) - prob_at(p, seq, b)) / 2e-6, 1e-6);
  }
}

TEST(Search, ReproducibleForFixedSeed) {
  const MeasurementProtocol p = basis_protocol(2);
  const OutcomeSequence seq = OutcomeSequence::parse("001");
  SearchConfig cfg;
  cfg.restarts = 4;
  cfg.seed = 31;
  const SearchResult a = maximize_probability(p, seq, cfg);
  const SearchResult b = maximize_probability(p, seq, cfg);
  EXPECT_EQ(a.value, b.value);
  EXPECT_LT(max_abs(a.unitary - b.unitary), 1e-12);
  EXPECT_TRUE(is_unitary(a.unitary));
  EXPECT_NEAR(sequence_probability(p, a.unitary, seq), a.value, 1e-12);
  cfg.threads = 2;
  const SearchResult c = maximize_probability(p, seq, cfg);
  EXPECT_EQ(a.value, c.value);
  EXPECT_EQ(random_parameters(4, 31, 2), random_parameters(4, 31, 2));
  EXPECT_NE(random_parameters(4, 31, 2), random_parameters(4, 31, 3));
}

TEST(Search, TrivialSequenceReachesOne) {
  SearchConfig cfg;
  cfg.restarts = 2;
  EXPECT_NEAR(maximize_probability(basis_protocol(1), OutcomeSequence::parse("000"), cfg).value, 1.0, 1e-9);
  EXPECT_NEAR(maximize_probability(basis_protocol(2), OutcomeSequence::parse("01"), cfg).value, 1.0, 1e-6);
}

TEST(Search, TrivialEnvironmentReachesClosedForm) {
  SearchConfig cfg;
  cfg.restarts = 8;
  const double v = maximize_probability(basis_protocol(1), OutcomeSequence::parse("001"), cfg).value;
  EXPECT_NEAR(v, 4.0 / 27.0, 1e-7);
}

TEST(Search, WarmStartIsNotWorseThanItsSeed) {
  const MeasurementProtocol p = basis_protocol(3);
  const OutcomeSequence seq = OutcomeSequence::parse("001");
  SearchConfig cfg;
  cfg.restarts = 1;
  cfg.max_iters = 5;
  cfg.warm_start = oracle::witness_unitary();
  const SearchResult r = maximize_probability(p, seq, cfg);
  EXPECT_NEAR(r.value, 1.0, 1e-9);
  cfg.record_trajectory = true;
  cfg.warm_start.reset();
  cfg.max_iters = 50;
  const SearchResult t = maximize_probability(p, seq, cfg);
  ASSERT_FALSE(t.trajectory.empty());
  for (std::size_t k = 1; k < t.trajectory.size(); ++k) EXPECT_GE(t.trajectory[k].second, t.trajectory[k - 1].second);
}

TEST(Search, RejectsBadInput) {
  SearchConfig cfg;
  cfg.restarts = 0;
  EXPECT_THROW(maximize_probability(basis_protocol(1), OutcomeSequence::parse("01"), cfg), InvalidArgument);
  EXPECT_THROW(maximize_probability(basis_protocol(1), OutcomeSequence::parse("02")), DimensionMismatch);
}
