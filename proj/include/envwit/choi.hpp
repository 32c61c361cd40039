#pragma once

#include <vector>

#include "envwit/protocol.hpp"

namespace envwit {

// Basis of the local slot is |i>|o>, index i * d_out + o.
struct ChoiMatrix {
  CMatrix matrix;
  int d_in = 0;
  int d_out = 0;
  bool normalized = false;
};

// Components c_(i,o) = U(o,i) of sum_i |i> (x) U|i>.
inline CVector choi_vector(const CMatrix& u) {
  const Eigen::Index d = u.rows();
  CVector c(d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index o = 0; o < d; ++o) c(i * d + o) = u(o, i);
  return c;
}

inline ChoiMatrix choi_of_unitary(const CMatrix& u, bool normalized) {
  if (!is_unitary(u)) throw NonUnitaryInput("choi_of_unitary: U^dagger U deviates from identity");
  const int d = static_cast<int>(u.rows());
  CVector c = choi_vector(u);
  CMatrix m = c * c.adjoint();
  if (normalized) m /= static_cast<double>(d);
  return {std::move(m), d, d, normalized};
}

// M_a for an intermediate step, or Tr_O M_a for the final measurement.
inline ChoiMatrix measure_prepare_choi(const MeasurementProtocol& p, int outcome, bool trace_out_final) {
  if (outcome < 0 || outcome >= p.alphabet_size())
    throw OutcomeOutOfRange("outcome " + std::to_string(outcome) + " outside alphabet of size " +
                            std::to_string(p.alphabet_size()));
  const int dE = p.d_E(), dS = p.d_S(), d = p.d_ES();
  const CMatrix& E = p.effect(outcome);
  if (trace_out_final) {
    CMatrix m = CMatrix::Zero(d, d);
    for (int e = 0; e < dE; ++e)
      for (int s = 0; s < dS; ++s)
        for (int s2 = 0; s2 < dS; ++s2) m(e * dS + s, e * dS + s2) = E(s2, s);
    return {std::move(m), d, 1, false};
  }
  CMatrix m = CMatrix::Zero(d * d, d * d);
  const CMatrix& r0 = p.rho_S0();
  for (int e = 0; e < dE; ++e)
    for (int s = 0; s < dS; ++s)
      for (int e2 = 0; e2 < dE; ++e2)
        for (int s2 = 0; s2 < dS; ++s2) {
          cplx w = E(s2, s);
          if (w == cplx(0.0)) continue;
          const int i = e * dS + s, j = e2 * dS + s2;
          for (int r = 0; r < dS; ++r)
            for (int r2 = 0; r2 < dS; ++r2)
              m(i * d + e * dS + r, j * d + e2 * dS + r2) = w * r0(r, r2);
        }
  return {std::move(m), d, d, false};
}

// Unitary U on (system, probe) with Tr_S[U (rho (x) |0><0|) U^dagger (1 (x) |a><a|)] = K_a rho K_a^dagger.
inline CMatrix dilate_kraus(const std::vector<CMatrix>& kraus, int d_S) {
  if (kraus.empty()) throw NotAnInstrument("no Kraus operators given");
  if (static_cast<int>(kraus.size()) > d_S)
    throw TooManyOutcomes(std::to_string(kraus.size()) + " Kraus operators exceed probe dimension " +
                          std::to_string(d_S));
  const Eigen::Index d = kraus.front().rows();
  CMatrix completeness = CMatrix::Zero(d, d);
  for (const CMatrix& k : kraus) {
    if (k.rows() != d || k.cols() != d) throw DimensionMismatch("Kraus operators must share one square shape");
    completeness += k.adjoint() * k;
  }
  if (max_abs(completeness - CMatrix::Identity(d, d)) > kAlgebraTol)
    throw NotAnInstrument("sum of K^dagger K is not the identity");

  const Eigen::Index D = d * d_S;
  CMatrix q = CMatrix::Zero(D, d);
  for (std::size_t a = 0; a < kraus.size(); ++a)
    for (Eigen::Index e = 0; e < d; ++e)
      for (Eigen::Index f = 0; f < d; ++f) q(f * d_S + static_cast<Eigen::Index>(a), e) = kraus[a](f, e);

  Eigen::HouseholderQR<CMatrix> qr(q);
  CMatrix basis = qr.householderQ();
  CMatrix u(D, D);
  Eigen::Index next = d;
  for (Eigen::Index e = 0; e < d; ++e)
    for (Eigen::Index s = 0; s < d_S; ++s) u.col(e * d_S + s) = s == 0 ? CVector(q.col(e)) : CVector(basis.col(next++));
  return u;
}

}  // namespace envwit
