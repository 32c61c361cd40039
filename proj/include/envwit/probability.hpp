#pragma once

#include <cstdint>
#include <vector>

#include "envwit/choi.hpp"

namespace envwit {

inline void check_compatible(const MeasurementProtocol& p, const OutcomeSequence& seq) {
  if (seq.alphabet_size() > p.alphabet_size())
    throw DimensionMismatch("sequence alphabet (" + std::to_string(seq.alphabet_size()) +
                            ") exceeds protocol alphabet (" + std::to_string(p.alphabet_size()) + ")");
}

// Tr_S[rho (1 (x) E_a)] (x) rho_S0
inline CMatrix apply_measure_prepare(const MeasurementProtocol& p, int a, const CMatrix& rho) {
  const int dE = p.d_E(), dS = p.d_S();
  CMatrix env = trace_second(rho * kron(CMatrix::Identity(dE, dE), p.effect(a)), dE, dS);
  return kron(env, p.rho_S0());
}

inline double sequence_probability(const MeasurementProtocol& p, const CMatrix& u, const OutcomeSequence& seq) {
  check_compatible(p, seq);
  if (u.rows() != p.d_ES() || u.cols() != p.d_ES())
    throw DimensionMismatch("unitary must be " + std::to_string(p.d_ES()) + "-dimensional");
  CMatrix rho = p.initial_state();
  const int L = seq.length();
  for (int l = 0; l < L; ++l) {
    rho = u * rho * u.adjoint();
    if (l + 1 < L) rho = apply_measure_prepare(p, seq[l], rho);
  }
  CMatrix last = kron(CMatrix::Identity(p.d_E(), p.d_E()), p.effect(seq[L - 1]));
  return (rho * last).trace().real();
}

// X = d^L (rho_E0 (x) rho_S0) (x) M_a1 (x) ... (x) M^_aL, kept as its tensor factors.
// Kronecker order of the factors equals slot order I1 O1 I2 O2 ... IL OL.
class ObjectiveOperator {
public:
  struct Entry {
    std::vector<int> row;  // slot indices u_l = i_l * d + o_l
    std::vector<int> col;
    cplx value;
  };

  ObjectiveOperator(int L, int d_ES, double scale, std::vector<CMatrix> factors)
      : L_(L), d_(d_ES), scale_(scale), factors_(std::move(factors)) {}

  int L() const { return L_; }
  int d_ES() const { return d_; }
  double scale() const { return scale_; }
  const std::vector<CMatrix>& factors() const { return factors_; }
  std::int64_t dim() const {
    std::int64_t n = 1;
    for (int l = 0; l < 2 * L_; ++l) n *= d_;
    return n;
  }

  // Tr[X^T (C_1 (x) ... (x) C_L)] with a common slot operator C, by chain contraction.
  cplx contract(const CMatrix& c) const {
    const int d = d_;
    if (c.rows() != d * d) throw DimensionMismatch("slot operator must be d_ES^2-dimensional");
    CMatrix v = factors_.front();
    CMatrix w(d, d);
    for (int l = 0; l < L_; ++l) {
      w.setZero();
      for (int i = 0; i < d; ++i)
        for (int i2 = 0; i2 < d; ++i2) {
          if (v(i, i2) == cplx(0.0)) continue;
          w += v(i, i2) * c.block(i * d, i2 * d, d, d);
        }
      const CMatrix& f = factors_[static_cast<std::size_t>(l) + 1];
      if (l + 1 == L_) return scale_ * (w.cwiseProduct(f)).sum();
      CMatrix next = CMatrix::Zero(d, d);
      for (int o = 0; o < d; ++o)
        for (int o2 = 0; o2 < d; ++o2) {
          if (w(o, o2) == cplx(0.0)) continue;
          next += w(o, o2) * f.block(o * d, o2 * d, d, d);
        }
      v = std::move(next);
    }
    return 0.0;
  }

  // Nonzero entries of X, with X_ab over slot multi-indices. Throws beyond the budget.
  std::vector<Entry> nonzeros(std::size_t budget = 50'000'000, double zero_tol = 0.0) const {
    struct Nz { int r, c; cplx v; };
    std::vector<std::vector<Nz>> per;
    std::size_t total = 1;
    for (const CMatrix& f : factors_) {
      std::vector<Nz> nz;
      for (int r = 0; r < f.rows(); ++r)
        for (int c = 0; c < f.cols(); ++c)
          if (std::abs(f(r, c)) > zero_tol) nz.push_back({r, c, f(r, c)});
      total *= nz.size();
      if (total > budget) throw IntractableSize("objective operator has more than " + std::to_string(budget) + " nonzeros");
      per.push_back(std::move(nz));
    }
    std::vector<Entry> out;
    out.reserve(total);
    const int d = d_;
    std::vector<std::size_t> pick(per.size(), 0);
    if (total == 0) return out;
    while (true) {
      Entry e{std::vector<int>(static_cast<std::size_t>(L_)), std::vector<int>(static_cast<std::size_t>(L_)), scale_};
      // factor 0 gives i_1; factor l in 1..L-1 gives (o_l, i_{l+1}); factor L gives o_L
      std::vector<int> ir(L_), ic(L_), orr(L_), oc(L_);
      for (std::size_t k = 0; k < per.size(); ++k) {
        const Nz& z = per[k][pick[k]];
        e.value *= z.v;
        if (k == 0) { ir[0] = z.r; ic[0] = z.c; }
        else if (static_cast<int>(k) == L_) { orr[L_ - 1] = z.r; oc[L_ - 1] = z.c; }
        else {
          orr[k - 1] = z.r / d; ir[k] = z.r % d;
          oc[k - 1] = z.c / d; ic[k] = z.c % d;
        }
      }
      for (int l = 0; l < L_; ++l) {
        e.row[l] = ir[l] * d + orr[l];
        e.col[l] = ic[l] * d + oc[l];
      }
      out.push_back(std::move(e));
      std::size_t k = 0;
      while (k < per.size() && ++pick[k] == per[k].size()) pick[k++] = 0;
      if (k == per.size()) break;
    }
    return out;
  }

  // Dense X; only for small L and d_ES.
  CMatrix dense(std::int64_t max_dim = 4096) const {
    if (dim() > max_dim) throw IntractableSize("objective operator of dimension " + std::to_string(dim()) + " too large to densify");
    CMatrix x = factors_.front();
    for (std::size_t k = 1; k < factors_.size(); ++k) x = kron(x, factors_[k]);
    return scale_ * x;
  }

private:
  int L_;
  int d_;
  double scale_;
  std::vector<CMatrix> factors_;
};

inline ObjectiveOperator build_objective(const MeasurementProtocol& p, const OutcomeSequence& seq) {
  check_compatible(p, seq);
  const int L = seq.length();
  std::vector<CMatrix> factors;
  factors.push_back(p.initial_state());
  for (int l = 0; l + 1 < L; ++l) factors.push_back(measure_prepare_choi(p, seq[l], false).matrix);
  factors.push_back(measure_prepare_choi(p, seq[L - 1], true).matrix);
  return ObjectiveOperator(L, p.d_ES(), std::pow(static_cast<double>(p.d_ES()), L), std::move(factors));
}

// Tr[X^T C_U^(x)L] with the normalized Choi matrix of U.
inline double sequence_probability_choi(const ObjectiveOperator& x, const CMatrix& u) {
  return x.contract(choi_of_unitary(u, true).matrix).real();
}

}  // namespace envwit
