#include <gtest/gtest.h>

#include <functional>

#include "oracles.hpp"

using namespace envwit;

namespace {

// Minimum class count over all set partitions of positions that are consistent
// with a deterministic transition model: i ~ j needs equal outputs and i+1 ~ j+1.
int dc_oracle(const std::vector<int>& out) {
  const int L = static_cast<int>(out.size());
  std::vector<int> label(static_cast<std::size_t>(L), 0);
  int best = L;
  std::function<void(int, int)> rec = [&](int k, int classes) {
    if (classes >= best) return;
    if (k == L) {
      for (int i = 0; i < L; ++i)
        for (int j = i + 1; j < L; ++j) {
          if (label[i] != label[j]) continue;
          if (out[i] != out[j]) return;
          if (j + 1 < L && label[i + 1] != label[j + 1]) return;
        }
      best = classes;
      return;
    }
    for (int c = 0; c <= classes; ++c) {
      label[k] = c;
      rec(k + 1, std::max(classes, c + 1));
    }
  };
  rec(0, 0);
  return best;
}

Rational omega(const std::string& s) { return omega_one(OutcomeSequence::parse(s)).value; }

}  // namespace

TEST(OmegaOne, ClosedFormGoldens) {
  EXPECT_EQ(omega("000"), Rational(1));
  EXPECT_EQ(omega("00"), Rational(1));
  EXPECT_EQ(omega("01"), Rational(1, 4));
  EXPECT_EQ(omega("001"), Rational(4, 27));
  EXPECT_EQ(omega("010"), Rational(4, 27));
  EXPECT_EQ(omega("011"), Rational(4, 27));
  EXPECT_EQ(omega("0001"), Rational(27, 256));
  EXPECT_EQ(omega("0011"), Rational(1, 16));
  EXPECT_EQ(omega("00101"), Rational(108, 3125));
  EXPECT_DOUBLE_EQ(omega_one(OutcomeSequence::parse("00101")).real, 0.03456);
  const auto b = omega_one(OutcomeSequence::parse("001"));
  EXPECT_EQ(b.str(), "4/27");
  EXPECT_EQ(b.per_symbol_probs, (std::vector<Rational>{Rational(2, 3), Rational(1, 3)}));
}

TEST(OmegaOne, DependsOnlyOnCounts) {
  EXPECT_EQ(omega("0011"), omega("0101"));
  EXPECT_EQ(omega("0011"), omega("1100"));
  EXPECT_EQ(omega("00101"), omega("11010"));
  EXPECT_EQ(omega_one(OutcomeSequence::parse("01", 5)).value, Rational(1, 4));
}

TEST(OmegaOne, MatchesClassicalBruteForce) {
  // product statistics q^n0 (1-q)^n1 on a fine grid never exceed the closed form
  for (const std::string s : {"001", "0001", "00101"}) {
    const double w = omega_one(OutcomeSequence::parse(s)).real;
    const auto n = OutcomeSequence::parse(s).counts();
    double grid = 0.0;
    for (int k = 0; k <= 10000; ++k) {
      const double q = k / 10000.0;
      grid = std::max(grid, std::pow(q, n[0]) * std::pow(1 - q, n[1]));
    }
    EXPECT_LE(grid, w + 1e-15);
    EXPECT_NEAR(grid, w, 1e-6);
  }
}

TEST(DeterministicComplexity, KnownValues) {
  EXPECT_EQ(deterministic_complexity(OutcomeSequence::parse("000")), 1);
  EXPECT_EQ(deterministic_complexity(OutcomeSequence::parse("01")), 2);
  EXPECT_EQ(deterministic_complexity(OutcomeSequence::parse("001")), 3);
  EXPECT_EQ(deterministic_complexity(OutcomeSequence::parse("0101")), 2);
  EXPECT_EQ(deterministic_complexity(OutcomeSequence::parse("00101")), 3);
  EXPECT_EQ(deterministic_complexity(OutcomeSequence::parse("0001")), 4);
}

TEST(DeterministicComplexity, MatchesPartitionOracleForAllBinarySequences) {
  int checked = 0;
  for (int L = 1; L <= 8; ++L)
    for (const auto& s : oracle::all_strings(2, L)) {
      const int got = deterministic_complexity(OutcomeSequence(s, 2));
      EXPECT_EQ(got, dc_oracle(s)) << OutcomeSequence(s, 2).str();
      ++checked;
    }
  EXPECT_EQ(checked, 510);
}

TEST(DeterministicComplexity, MatchesOracleOnTernarySamples) {
  for (const auto& s : oracle::all_strings(3, 6))
    if (oracle::string_index(s, 3) % 7 == 0)
      EXPECT_EQ(deterministic_complexity(OutcomeSequence(s, 3)), dc_oracle(s)) << OutcomeSequence(s, 3).str();
}

TEST(Triviality, Classification) {
  EXPECT_EQ(triviality_check(OutcomeSequence::parse("01"), 2, 2), Triviality::trivially_one);
  EXPECT_EQ(triviality_check(OutcomeSequence::parse("001"), 2, 3), Triviality::trivially_one);
  EXPECT_EQ(triviality_check(OutcomeSequence::parse("001"), 2, 2), Triviality::unknown);
  EXPECT_EQ(triviality_check(OutcomeSequence::parse("012"), 2, 5), Triviality::strictly_below_one);
  EXPECT_EQ(triviality_check(OutcomeSequence::parse("000"), 2, 1), Triviality::trivially_one);
  EXPECT_STREQ(to_string(Triviality::unknown), "unknown");
}
