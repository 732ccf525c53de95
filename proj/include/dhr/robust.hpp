#ifndef DHR_ROBUST_HPP
#define DHR_ROBUST_HPP

#include "dhr/model.hpp"
#include "dhr/numerics.hpp"

namespace dhr {

/// Maximal real part over the eigenvalues of A.
inline double spectral_abscissa(const CMatrix& a) {
  if (a.rows() != a.cols())
    throw error(errc::non_square, "spectral_abscissa expects a square matrix");
  Eigen::ComplexEigenSolver<CMatrix> es(a, false);
  return es.eigenvalues().real().maxCoeff();
}

/// DH representation (J, R, Q = I) of a stable matrix A obtained from a Gram
/// solution X: T = X^{1/2}, A_T = T A T^{-1}, J = skew part, R = -Hermitian
/// part of A_T.
struct RobustRepresentation {
  CMatrix J, R;
  CMatrix X, T;
  double mu = 0.0;       // spectral abscissa of A
  double epsilon = 0.0;  // regularization of the shifted Lyapunov solve (0: none)
};

inline DHSystem to_dh(const RobustRepresentation& rep) {
  return {rep.J, rep.R, CMatrix::Identity(rep.J.rows(), rep.J.cols())};
}

namespace detail {

inline RobustRepresentation representation_from_gram(const CMatrix& a, CMatrix x,
                                                     double mu, double epsilon) {
  x = hermitian_part(x);
  const HermitianEig xe = hermitian_eig(x);
  const Index n = a.rows();
  const double lmax = xe.values(n - 1);
  if (!(xe.values(0) > 1e-12 * std::max(lmax, 0.0)))
    throw error(errc::not_positive_definite,
                "Gram solution X is not positive definite");
  if (lmax / xe.values(0) > 1e12)
    throw error(errc::ill_conditioned,
                "cond(X) above 1e12; retry with a larger epsilon");

  const RVector roots = xe.values.cwiseSqrt();
  const CMatrix t = xe.vectors * roots.asDiagonal() * xe.vectors.adjoint();
  const CMatrix t_inv =
      xe.vectors * roots.cwiseInverse().asDiagonal() * xe.vectors.adjoint();
  const CMatrix a_t = t * a * t_inv;

  RobustRepresentation rep;
  rep.J = skew_part(a_t);
  rep.R = -hermitian_part(a_t);
  rep.X = std::move(x);
  rep.T = t;
  rep.mu = mu;
  rep.epsilon = epsilon;
  return rep;
}

}  // namespace detail

/// Optimally robust representation: solves the shifted Lyapunov equation
/// (A - (mu+eps)I)^H X + X (A - (mu+eps)I) = -eps I (any solution witnesses
/// the strict Lyapunov inequality), normalizes X to unit spectral norm and
/// changes coordinates with T = X^{1/2}. The smallest eigenvalue of R lands
/// at |mu| up to O(eps).
inline RobustRepresentation optimal_representation(const CMatrix& a,
                                                   double epsilon = 1e-8) {
  if (a.rows() != a.cols())
    throw error(errc::non_square, "optimal_representation expects a square matrix");
  if (!(epsilon > 0.0)) throw error(errc::ill_posed, "epsilon must be positive");
  const double mu = spectral_abscissa(a);
  if (!(mu < 0.0))
    throw error(errc::not_stable, "spectral abscissa " + std::to_string(mu) +
                                      " is not negative");
  const Index n = a.rows();
  const CMatrix shifted = a - (mu + epsilon) * CMatrix::Identity(n, n);
  CMatrix x = lyapunov_solve(shifted, epsilon * CMatrix::Identity(n, n));
  x /= spectral_norm(x);
  return detail::representation_from_gram(a, std::move(x), mu, epsilon);
}

/// Comparison representation from A^H X + X A = -Z^H Z for a chosen factor Z.
inline RobustRepresentation representation_from_factor(const CMatrix& a,
                                                       const CMatrix& z) {
  if (a.rows() != a.cols())
    throw error(errc::non_square, "representation_from_factor expects square A");
  if (z.cols() != a.rows())
    throw error(errc::shape_mismatch, "Z must have as many columns as A");
  const double mu = spectral_abscissa(a);
  if (!(mu < 0.0))
    throw error(errc::not_stable, "A must be asymptotically stable");
  CMatrix x = lyapunov_solve(a, hermitian_part(z.adjoint() * z));
  return detail::representation_from_gram(a, std::move(x), mu, 0.0);
}

}  // namespace dhr

#endif  // DHR_ROBUST_HPP
