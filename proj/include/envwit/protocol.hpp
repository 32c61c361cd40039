#pragma once

#include <string>
#include <vector>

#include "envwit/linalg.hpp"

namespace envwit {

class MeasurementProtocol {
public:
  MeasurementProtocol(int d_S, int d_E, CMatrix rho_S0, CMatrix rho_E0, std::vector<CMatrix> povm)
      : d_S_(d_S), d_E_(d_E), rho_S0_(std::move(rho_S0)), rho_E0_(std::move(rho_E0)), povm_(std::move(povm)) {
    validate();
  }

  int d_S() const { return d_S_; }
  int d_E() const { return d_E_; }
  int d_ES() const { return d_S_ * d_E_; }
  int alphabet_size() const { return static_cast<int>(povm_.size()); }
  const CMatrix& rho_S0() const { return rho_S0_; }
  const CMatrix& rho_E0() const { return rho_E0_; }
  const std::vector<CMatrix>& povm() const { return povm_; }
  const CMatrix& effect(int a) const { return povm_.at(static_cast<std::size_t>(a)); }

  // Same probe data with a different environment dimension and |0><0| start.
  MeasurementProtocol with_environment(int d_E) const {
    CMatrix rho = CMatrix::Zero(d_E, d_E);
    rho(0, 0) = 1.0;
    return MeasurementProtocol(d_S_, d_E, rho_S0_, rho, povm_);
  }

  CMatrix initial_state() const { return kron(rho_E0_, rho_S0_); }

private:
  void validate() const {
    if (d_S_ < 1 || d_E_ < 1) throw DimensionMismatch("protocol dimensions must be positive");
    if (rho_S0_.rows() != d_S_ || rho_S0_.cols() != d_S_)
      throw DimensionMismatch("rho_S0 must be " + std::to_string(d_S_) + "x" + std::to_string(d_S_));
    if (rho_E0_.rows() != d_E_ || rho_E0_.cols() != d_E_)
      throw DimensionMismatch("rho_E0 must be " + std::to_string(d_E_) + "x" + std::to_string(d_E_));
    if (!is_density(rho_S0_)) throw InvalidArgument("rho_S0 is not a density matrix");
    if (!is_density(rho_E0_)) throw InvalidArgument("rho_E0 is not a density matrix");
    if (povm_.empty()) throw InvalidArgument("POVM has no elements");
    CMatrix sum = CMatrix::Zero(d_S_, d_S_);
    for (std::size_t a = 0; a < povm_.size(); ++a) {
      const CMatrix& e = povm_[a];
      if (e.rows() != d_S_ || e.cols() != d_S_)
        throw DimensionMismatch("POVM element " + std::to_string(a) + " has wrong dimension");
      if (!is_psd(e)) throw InvalidArgument("POVM element " + std::to_string(a) + " is not PSD");
      sum += e;
    }
    if (max_abs(sum - CMatrix::Identity(d_S_, d_S_)) > kAlgebraTol)
      throw InvalidArgument("POVM elements do not sum to the identity");
  }

  int d_S_;
  int d_E_;
  CMatrix rho_S0_;
  CMatrix rho_E0_;
  std::vector<CMatrix> povm_;
};

// Computational-basis projective measurement, probe reset and environment start in |0>.
inline MeasurementProtocol basis_protocol(int d_E, int d_S = 2) {
  std::vector<CMatrix> povm;
  for (int a = 0; a < d_S; ++a) povm.push_back(ketbra(d_S, a, a));
  return MeasurementProtocol(d_S, d_E, ketbra(d_S, 0, 0), ketbra(d_E, 0, 0), povm);
}

class OutcomeSequence {
public:
  OutcomeSequence(std::vector<int> symbols, int alphabet_size)
      : symbols_(std::move(symbols)), alphabet_size_(alphabet_size) {
    if (symbols_.empty()) throw InvalidArgument("outcome sequence is empty");
    if (alphabet_size_ < 1) throw InvalidArgument("alphabet size must be positive");
    for (int a : symbols_)
      if (a < 0 || a >= alphabet_size_)
        throw OutcomeOutOfRange("symbol " + std::to_string(a) + " outside alphabet of size " +
                                std::to_string(alphabet_size_));
  }

  // Digits '0'..'9'; the alphabet defaults to max symbol + 1 but at least 2.
  static OutcomeSequence parse(const std::string& text, int alphabet_size = 0) {
    std::vector<int> symbols;
    int top = 0;
    for (char c : text) {
      if (c < '0' || c > '9') throw InvalidArgument("sequence '" + text + "' must consist of digits");
      symbols.push_back(c - '0');
      top = std::max(top, c - '0');
    }
    if (alphabet_size == 0) alphabet_size = std::max(2, top + 1);
    return OutcomeSequence(std::move(symbols), alphabet_size);
  }

  int length() const { return static_cast<int>(symbols_.size()); }
  int alphabet_size() const { return alphabet_size_; }
  const std::vector<int>& symbols() const { return symbols_; }
  int operator[](int l) const { return symbols_[static_cast<std::size_t>(l)]; }

  std::vector<int> counts() const {
    std::vector<int> n(static_cast<std::size_t>(alphabet_size_), 0);
    for (int a : symbols_) ++n[static_cast<std::size_t>(a)];
    return n;
  }

  int distinct() const {
    int k = 0;
    for (int c : counts()) k += c > 0;
    return k;
  }

  std::string str() const {
    std::string s;
    for (int a : symbols_) s += static_cast<char>('0' + a);
    return s;
  }

  bool operator==(const OutcomeSequence&) const = default;

private:
  std::vector<int> symbols_;
  int alphabet_size_;
};

}  // namespace envwit
