#ifndef DHR_NUMERICS_HPP
#define DHR_NUMERICS_HPP

#include <string>

#include "dhr/core.hpp"

namespace dhr {

struct HermitianEig {
  RVector values;   // ascending
  CMatrix vectors;  // unitary, column k pairs with values(k)
};

/// Eigendecomposition of a Hermitian matrix. The input is gated against the
/// relative symmetry tolerance and symmetrized before factoring, so the
/// returned factors are exactly those of (A+A*)/2.
inline HermitianEig hermitian_eig(const CMatrix& a) {
  if (a.rows() != a.cols())
    throw error(errc::non_square, "hermitian_eig expects a square matrix");
  const double dev = hermitian_deviation(a);
  if (dev > structure_tol(a))
    throw error(errc::not_hermitian,
                "deviation " + std::to_string(dev) + " above tolerance");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(a));
  if (es.info() != Eigen::Success)
    throw error(errc::solver_failed, "SelfAdjointEigenSolver did not converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

struct SmallestSingular {
  double sigma = 0.0;
  CVector right_vector;  // unit norm, ||A v|| = sigma
};

/// Smallest singular value and right singular vector of a tall matrix.
inline SmallestSingular smallest_singular(const CMatrix& a) {
  if (a.rows() < a.cols())
    throw error(errc::shape_mismatch, "smallest_singular expects rows >= cols");
  const Index k = a.cols() - 1;
  if (a.rows() + a.cols() <= 64) {
    Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeThinV);
    return {svd.singularValues()(k), svd.matrixV().col(k)};
  }
  Eigen::BDCSVD<CMatrix> svd(a, Eigen::ComputeThinV);
  return {svd.singularValues()(k), svd.matrixV().col(k)};
}

/// Dense solve A X = B with a reciprocal-condition gate; a failure signals
/// that A is numerically singular (for resolvent builds: lambda is an
/// eigenvalue of the system matrix).
inline CMatrix solve_linear(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != a.cols())
    throw error(errc::non_square, "solve_linear expects a square matrix");
  if (a.rows() != b.rows())
    throw error(errc::shape_mismatch, "solve_linear: rhs row count mismatch");
  Eigen::PartialPivLU<CMatrix> lu(a);
  const double rc = lu.rcond();
  if (!(rc > 1e-14))
    throw error(errc::singular, "reciprocal condition estimate " + std::to_string(rc));
  return lu.solve(b);
}

/// Solves A* X + X A = -C for Hermitian C via complex Schur reduction and
/// column-wise triangular back-substitution; X is returned Hermitian.
inline CMatrix lyapunov_solve(const CMatrix& a, const CMatrix& c) {
  if (a.rows() != a.cols())
    throw error(errc::non_square, "lyapunov_solve expects a square matrix");
  if (c.rows() != c.cols() || c.rows() != a.rows())
    throw error(errc::shape_mismatch, "lyapunov_solve: rhs size mismatch");
  if (hermitian_deviation(c) > structure_tol(c))
    throw error(errc::not_hermitian_rhs, "Lyapunov right-hand side must be Hermitian");

  const Index n = a.rows();
  Eigen::ComplexSchur<CMatrix> schur(a);
  if (schur.info() != Eigen::Success)
    throw error(errc::solver_failed, "complex Schur decomposition failed");
  const CMatrix& t = schur.matrixT();
  const CMatrix& u = schur.matrixU();

  const CMatrix ct = u.adjoint() * hermitian_part(c) * u;
  CMatrix y = CMatrix::Zero(n, n);
  // Column k of T*Y + YT = -C~ depends only on columns j <= k.
  for (Index k = 0; k < n; ++k) {
    CVector rhs = -ct.col(k);
    for (Index j = 0; j < k; ++j) rhs -= t(j, k) * y.col(j);
    CMatrix lower = t.adjoint();
    for (Index i = 0; i < n; ++i) {
      lower(i, i) += t(k, k);
      const double scale = 1.0 + std::abs(t(i, i)) + std::abs(t(k, k));
      if (std::abs(lower(i, i)) <= 1e-12 * scale)
        throw error(errc::spectrum_conflict,
                    "lambda_i + conj(lambda_j) vanishes; Lyapunov operator singular");
    }
    y.col(k) = lower.triangularView<Eigen::Lower>().solve(rhs);
  }
  CMatrix x = u * y * u.adjoint();
  return hermitian_part(x);
}

/// Orthonormal basis of the (numerical) nullspace of a Hermitian PSD matrix.
/// tol <= 0 selects the default n * eps * lambda_max(A). May return a matrix
/// with zero columns.
inline CMatrix nullspace_basis(const CMatrix& a, double tol = -1.0) {
  const HermitianEig eig = hermitian_eig(a);
  const Index n = a.rows();
  if (tol <= 0.0) {
    const double lmax = std::max(eig.values(n - 1), 0.0);
    tol = static_cast<double>(n) * std::numeric_limits<double>::epsilon() * lmax;
  }
  Index k = 0;
  while (k < n && eig.values(k) <= tol) ++k;
  return eig.vectors.leftCols(k);
}

/// Hermitian positive definite square root via eigendecomposition.
inline CMatrix hermitian_sqrt(const CMatrix& a) {
  const HermitianEig eig = hermitian_eig(a);
  const Index n = a.rows();
  const double lmax = eig.values(n - 1);
  if (!(eig.values(0) > 1e-14 * std::max(1.0, lmax)))
    throw error(errc::not_positive_definite, "hermitian_sqrt needs a PD matrix");
  return eig.vectors * eig.values.cwiseSqrt().asDiagonal() * eig.vectors.adjoint();
}

}  // namespace dhr

#endif  // DHR_NUMERICS_HPP
