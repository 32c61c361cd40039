#pragma once

#include <Eigen/Dense>
#include <complex>
#include <random>

#include "envwit/errors.hpp"

namespace envwit {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr double kAlgebraTol = 1e-10;
inline constexpr double kCompositionTol = 1e-9;

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const CMatrix& m, double tol = kAlgebraTol) {
  return m.rows() == m.cols() && max_abs(m - m.adjoint()) <= tol;
}

inline bool is_unitary(const CMatrix& u, double tol = kAlgebraTol) {
  if (u.rows() != u.cols()) return false;
  return max_abs(u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols())) <= tol;
}

inline double min_eigenvalue(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

inline bool is_psd(const CMatrix& m, double tol = kAlgebraTol) {
  return is_hermitian(m, tol) && min_eigenvalue(m) >= -tol;
}

inline bool is_density(const CMatrix& m, double tol = kAlgebraTol) {
  return is_psd(m, tol) && std::abs(m.trace() - cplx(1.0)) <= tol;
}

// Partial trace of an operator on A (dim da) tensor B (dim db).
inline CMatrix trace_second(const CMatrix& m, Eigen::Index da, Eigen::Index db) {
  if (m.rows() != da * db || m.cols() != da * db)
    throw DimensionMismatch("trace_second: operator is not " + std::to_string(da * db) + "-dimensional");
  CMatrix out = CMatrix::Zero(da, da);
  for (Eigen::Index i = 0; i < da; ++i)
    for (Eigen::Index j = 0; j < da; ++j)
      for (Eigen::Index k = 0; k < db; ++k) out(i, j) += m(i * db + k, j * db + k);
  return out;
}

inline CMatrix trace_first(const CMatrix& m, Eigen::Index da, Eigen::Index db) {
  if (m.rows() != da * db || m.cols() != da * db)
    throw DimensionMismatch("trace_first: operator is not " + std::to_string(da * db) + "-dimensional");
  CMatrix out = CMatrix::Zero(db, db);
  for (Eigen::Index k = 0; k < da; ++k) out += m.block(k * db, k * db, db, db);
  return out;
}

inline CMatrix ketbra(Eigen::Index dim, Eigen::Index i, Eigen::Index j) {
  CMatrix m = CMatrix::Zero(dim, dim);
  m(i, j) = 1.0;
  return m;
}

// U = exp(iH) for Hermitian H.
inline CMatrix expi_hermitian(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (h + h.adjoint()));
  CVector phases = es.eigenvalues().unaryExpr([](double l) { return std::exp(cplx(0.0, l)); });
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

// Hermitian H with exp(iH) = U and spectrum in (-pi, pi].
inline CMatrix unitary_log(const CMatrix& u) {
  if (!is_unitary(u, 1e-8)) throw NonUnitaryInput("unitary_log: input is not unitary");
  Eigen::ComplexSchur<CMatrix> schur(u);
  const CMatrix& q = schur.matrixU();
  CVector angles(u.rows());
  for (Eigen::Index k = 0; k < u.rows(); ++k) angles(k) = std::arg(schur.matrixT()(k, k));
  CMatrix h = q * angles.asDiagonal() * q.adjoint();
  return 0.5 * (h + h.adjoint());
}

template <class Rng>
CMatrix haar_unitary(Eigen::Index d, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMatrix z(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) z(i, j) = cplx(g(rng), g(rng));
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ();
  CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < d; ++k) {
    cplx rk = r(k, k);
    q.col(k) *= std::abs(rk) > 0 ? rk / std::abs(rk) : cplx(1.0);
  }
  return q;
}

template <class Rng>
CMatrix random_density(Eigen::Index d, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMatrix z(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) z(i, j) = cplx(g(rng), g(rng));
  CMatrix rho = z * z.adjoint();
  return rho / rho.trace();
}

}  // namespace envwit
