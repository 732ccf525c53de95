#ifndef DHR_TEST_SUPPORT_HPP
#define DHR_TEST_SUPPORT_HPP

#include <random>

#include "dhr/dhr.hpp"

namespace dhr::test {

inline CMatrix gaussian(Index rows, Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return detail::complex_gaussian(rows, cols, rng);
}

inline CVector gaussian_vector(Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return detail::complex_gaussian_vector(n, rng);
}

inline CMatrix random_hermitian(Index n, std::uint64_t seed) {
  const CMatrix a = gaussian(n, n, seed);
  return hermitian_part(a);
}

inline CMatrix random_psd(Index n, std::uint64_t seed, Index rank = -1) {
  if (rank < 0) rank = n;
  const CMatrix c = gaussian(rank, n, seed);
  return hermitian_part(c.adjoint() * c);
}

inline CMatrix random_unitary(Index n, std::uint64_t seed) {
  const CMatrix a = gaussian(n, n, seed);
  Eigen::HouseholderQR<CMatrix> qr(a);
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  return q;
}

/// Random matrix with spectral abscissa forced to -0.5.
inline CMatrix random_stable(Index n, std::uint64_t seed) {
  CMatrix a = gaussian(n, n, seed);
  const double mu = spectral_abscissa(a);
  a -= (mu + 0.5) * CMatrix::Identity(n, n);
  return a;
}

/// Halton low-discrepancy sequence point, bases 2,3,5,7,...
inline double halton(std::uint64_t index, unsigned base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * static_cast<double>(index % base);
    index /= base;
  }
  return r;
}

/// Quasi-random unit vector on the complex sphere: Halton pairs mapped to
/// normals via Box-Muller, then normalized.
inline CVector halton_sphere_point(Index n, std::uint64_t index) {
  static const unsigned primes[] = {2,  3,  5,  7,  11, 13, 17, 19,
                                    23, 29, 31, 37, 41, 43, 47, 53};
  CVector v(n);
  for (Index i = 0; i < n; ++i) {
    const double u1 = std::max(halton(index + 1, primes[(2 * i) % 16]), 1e-16);
    const double u2 = halton(index + 1, primes[(2 * i + 1) % 16]);
    const double rad = std::sqrt(-2.0 * std::log(u1));
    v(i) = Complex(rad * std::cos(2.0 * M_PI * u2), rad * std::sin(2.0 * M_PI * u2));
  }
  const double norm = v.norm();
  return norm > 0 ? CVector(v / norm) : halton_sphere_point(n, index + 7919);
}

}  // namespace dhr::test

#endif  // DHR_TEST_SUPPORT_HPP
