#ifndef DHR_MAPPING_HPP
#define DHR_MAPPING_HPP

#include <cassert>

#include "dhr/core.hpp"
#include "dhr/model.hpp"

namespace dhr {

enum class MapStructure { Hermitian, SkewHermitian, NegSemidefinite };

struct MappingResult {
  CMatrix map;
  double attained_norm = 0.0;
  MapStructure structure = MapStructure::Hermitian;
};

/// Minimal-spectral-norm Hermitian H with H x = y. Exists iff Im(x* y) = 0;
/// the attained norm is ||y|| / ||x||. For linearly independent x, y the map
/// is the rank-2 matrix with eigenvalues +-||y||/||x|| on span{x, y}
/// (eigenvectors y +- (||y||/||x||) x), else y x* / (x* x).
inline MappingResult min_hermitian_map(const CVector& x, const CVector& y) {
  if (x.size() != y.size())
    throw error(errc::dimension_mismatch, "x and y must have equal length");
  const double xn = x.norm();
  if (xn == 0.0) throw error(errc::zero_vector, "x must be nonzero");
  const double yn = y.norm();
  const Complex xy = x.dot(y);  // x* y
  if (std::abs(xy.imag()) > 1e-12 * xn * yn)
    throw error(errc::no_such_map, "Im(x* y) != 0: no Hermitian map");

  MappingResult res;
  res.structure = MapStructure::Hermitian;
  res.attained_norm = yn / xn;

  const Complex alpha_c = xy / (xn * xn);
  const CVector w = y - alpha_c * x;
  if (w.norm() <= 1e-12 * yn || yn == 0.0) {
    res.map = y * x.adjoint() / (xn * xn);  // dependent pair
    return res;
  }
  const double alpha = xy.real() / (xn * xn);
  const double b = w.norm() / xn;
  const CVector xh = x / xn;
  const CVector wh = w / w.norm();
  res.map = alpha * (xh * xh.adjoint()) - alpha * (wh * wh.adjoint()) +
            b * (xh * wh.adjoint() + wh * xh.adjoint());
  return res;
}

/// Minimal-spectral-norm skew-Hermitian S with S x = y. Exists iff
/// Re(x* y) = 0; constructed as -i H where H is the minimal Hermitian map
/// sending x to i y.
inline MappingResult min_skew_hermitian_map(const CVector& x, const CVector& y) {
  if (x.size() != y.size())
    throw error(errc::dimension_mismatch, "x and y must have equal length");
  const double xn = x.norm();
  if (xn == 0.0) throw error(errc::zero_vector, "x must be nonzero");
  const Complex xy = x.dot(y);
  if (std::abs(xy.real()) > 1e-12 * xn * y.norm())
    throw error(errc::no_such_map, "Re(x* y) != 0: no skew-Hermitian map");

  MappingResult herm = min_hermitian_map(x, CVector(Complex(0, 1) * y));
  MappingResult res;
  res.structure = MapStructure::SkewHermitian;
  res.attained_norm = herm.attained_norm;
  res.map = Complex(0, -1) * herm.map;
  return res;
}

/// Minimal-norm Hermitian negative semidefinite dR with dR (Qx) = -R Q x,
/// i.e. (R + dR) Q x = 0: the rank-one map -(RQx)(RQx)*/(x*QRQx) with norm
/// ||RQx||^2 / (x*QRQx), and dR = 0 when R Q x = 0 (the 0/0 convention).
/// R + dR stays PSD for PSD R.
inline MappingResult min_negsemidef_map(const CMatrix& r, const CMatrix& q,
                                        const CVector& x) {
  if (r.rows() != r.cols() || q.rows() != q.cols() || r.rows() != q.rows() ||
      x.size() != r.rows())
    throw error(errc::dimension_mismatch, "R, Q, x sizes must agree");
  if (x.norm() == 0.0) throw error(errc::zero_vector, "x must be nonzero");

  const CVector qx = q * x;
  const CVector v = r * qx;
  const double den = qx.dot(v).real();  // x* Q R Q x >= 0 for PSD R
  const double scale = std::max({1.0, v.squaredNorm(), den});
  const double num = v.squaredNorm();

  MappingResult res;
  res.structure = MapStructure::NegSemidefinite;
  if (num <= kRqZeroTol * scale && den <= kRqZeroTol * scale) {
    res.map = CMatrix::Zero(r.rows(), r.cols());
    res.attained_norm = 0.0;
    return res;
  }
  res.map = -(v * v.adjoint()) / den;
  res.attained_norm = num / den;
#ifndef NDEBUG
  {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(r) + res.map);
    assert(es.eigenvalues()(0) >= -1e-10 * (1.0 + es.eigenvalues().cwiseAbs().maxCoeff()));
  }
#endif
  return res;
}

}  // namespace dhr

#endif  // DHR_MAPPING_HPP
