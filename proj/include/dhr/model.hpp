#ifndef DHR_MODEL_HPP
#define DHR_MODEL_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <string>

#include "dhr/core.hpp"
#include "dhr/numerics.hpp"

namespace dhr {

constexpr double kStabTol = 1e-10;    // gate on max real part for asymptotic stability
constexpr double kRqZeroTol = 1e-14;  // 0/0 := 0 convention threshold

/// The triple x' = (J - R) Q x with J skew-Hermitian, R PSD, Q PD.
struct DHSystem {
  CMatrix J, R, Q;
  Index size() const { return J.rows(); }
  CMatrix system_matrix() const { return (J - R) * Q; }
};

struct ValidationReport {
  bool dims_ok = false;
  double skew_deviation = 0.0;   // ||J + J*||_F
  double r_min_eigenvalue = 0.0;
  double r_max_eigenvalue = 0.0;
  double q_min_eigenvalue = 0.0;
  double spectral_abscissa = 0.0;  // max Re eigenvalue of (J-R)Q
  bool j_skew = false;
  bool r_psd = false;
  bool q_pd = false;
  bool asymptotically_stable = false;
  bool structure_valid() const { return dims_ok && j_skew && r_psd && q_pd; }
};

inline ValidationReport validate(const DHSystem& sys) {
  ValidationReport rep;
  const Index n = sys.J.rows();
  if (sys.J.cols() != n || sys.R.rows() != n || sys.R.cols() != n ||
      sys.Q.rows() != n || sys.Q.cols() != n || n < 1)
    throw error(errc::dimension_mismatch, "J, R, Q must be square and equally sized");
  rep.dims_ok = true;

  rep.skew_deviation = skew_deviation(sys.J);
  rep.j_skew = rep.skew_deviation <= 1e-12 * (1.0 + sys.J.norm());

  const HermitianEig re = hermitian_eig(hermitian_part(sys.R));
  rep.r_min_eigenvalue = re.values(0);
  rep.r_max_eigenvalue = re.values(n - 1);
  rep.r_psd = hermitian_deviation(sys.R) <= structure_tol(sys.R) &&
              re.values(0) >= -1e-12 * (1.0 + std::max(re.values(n - 1), 0.0));

  const HermitianEig qe = hermitian_eig(hermitian_part(sys.Q));
  rep.q_min_eigenvalue = qe.values(0);
  rep.q_pd = hermitian_deviation(sys.Q) <= structure_tol(sys.Q) &&
             qe.values(0) >= 1e-12;

  Eigen::ComplexEigenSolver<CMatrix> es(sys.system_matrix(), false);
  rep.spectral_abscissa = es.eigenvalues().real().maxCoeff();
  rep.asymptotically_stable = rep.spectral_abscissa < -kStabTol;
  return rep;
}

enum class PerturbationClass { Unstructured, S, S_i, S_d };

inline const char* class_name(PerturbationClass c) {
  switch (c) {
    case PerturbationClass::Unstructured: return "unstructured";
    case PerturbationClass::S: return "s";
    case PerturbationClass::S_i: return "si";
    case PerturbationClass::S_d: return "sd";
  }
  return "?";
}

/// True when membership in `tight` implies membership in `claimed`
/// (S_d subset of S_i subset of S subset of unstructured).
inline bool class_within(PerturbationClass tight, PerturbationClass claimed) {
  const auto rank = [](PerturbationClass c) {
    switch (c) {
      case PerturbationClass::S_d: return 3;
      case PerturbationClass::S_i: return 2;
      case PerturbationClass::S: return 1;
      case PerturbationClass::Unstructured: return 0;
    }
    return 0;
  };
  return rank(tight) >= rank(claimed);
}

inline double joint_norm(const CMatrix& delta_j, const CMatrix& delta_r) {
  if (delta_j.rows() != delta_j.cols() || delta_r.rows() != delta_r.cols() ||
      delta_j.rows() != delta_r.rows())
    throw error(errc::dimension_mismatch, "perturbation pair must be square, equal sizes");
  return std::hypot(spectral_norm(delta_j), spectral_norm(delta_r));
}

struct PerturbationPair {
  CMatrix delta_j, delta_r;
  double norm = 0.0;  // sqrt(||dJ||^2 + ||dR||^2), spectral norms
};

inline PerturbationPair make_pair(CMatrix delta_j, CMatrix delta_r) {
  PerturbationPair p{std::move(delta_j), std::move(delta_r), 0.0};
  p.norm = joint_norm(p.delta_j, p.delta_r);
  return p;
}

/// Tightest admissibility class of (dJ, dR) against the given system.
inline PerturbationClass classify(const DHSystem& sys, const PerturbationPair& p) {
  const Index n = sys.size();
  if (p.delta_j.rows() != n || p.delta_j.cols() != n || p.delta_r.rows() != n ||
      p.delta_r.cols() != n)
    throw error(errc::dimension_mismatch, "perturbation size does not match system");

  const bool j_skew = skew_deviation(p.delta_j) <= 1e-12 * (1.0 + p.delta_j.norm());
  const bool r_herm = hermitian_deviation(p.delta_r) <= structure_tol(p.delta_r);
  if (!j_skew || !r_herm) return PerturbationClass::Unstructured;

  const double r_lmax =
      std::max(hermitian_eig(hermitian_part(sys.R)).values(sys.size() - 1), 0.0);
  const double psd_tol = 1e-10 * (1.0 + r_lmax);

  const CMatrix dr = hermitian_part(p.delta_r);
  const bool dr_nsd = hermitian_eig(dr).values(n - 1) <= psd_tol;
  const bool sum_psd =
      hermitian_eig(hermitian_part(sys.R) + dr).values(0) >= -psd_tol;

  if (dr_nsd && sum_psd) return PerturbationClass::S_d;
  if (sum_psd) return PerturbationClass::S_i;
  return PerturbationClass::S;
}

namespace detail {

inline CMatrix complex_gaussian(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix m(rows, cols);
  const double s = 1.0 / std::sqrt(2.0);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(i, j) = Complex(re * s, im * s);
    }
  return m;
}

inline CVector complex_gaussian_vector(Index n, std::mt19937_64& rng) {
  return complex_gaussian(n, 1, rng).col(0);
}

}  // namespace detail

/// Seeded random asymptotically stable DH system:
/// J = (B-B*)/2, R = C*C/n, Q = D*D/n + 0.1 I. Re-draws (max 10) until the
/// stability gate passes.
inline DHSystem random_dh(Index n, std::uint64_t seed) {
  if (n < 1) throw error(errc::dimension_mismatch, "n must be >= 1");
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < 10; ++attempt) {
    const CMatrix b = detail::complex_gaussian(n, n, rng);
    const CMatrix c = detail::complex_gaussian(n, n, rng);
    const CMatrix d = detail::complex_gaussian(n, n, rng);
    DHSystem sys;
    sys.J = 0.5 * (b - b.adjoint());
    sys.R = (c.adjoint() * c) / static_cast<double>(n);
    sys.Q = (d.adjoint() * d) / static_cast<double>(n) +
            0.1 * CMatrix::Identity(n, n);
    sys.R = hermitian_part(sys.R);
    sys.Q = hermitian_part(sys.Q);
    const ValidationReport rep = validate(sys);
    if (rep.structure_valid() && rep.asymptotically_stable) return sys;
  }
  throw error(errc::generation_failed, "no asymptotically stable draw in 10 attempts");
}

struct BrakeOverrides {
  std::optional<CMatrix> G, M, K, D;
};

/// Disk-brake-squeal first-order structure (circulatory term absent):
/// J = [[G, K], [-K, 0]], R = [[D, 0], [0, 0]], Q = blkdiag(M, K)^{-1}.
inline DHSystem brake_squeal(Index m, std::uint64_t seed,
                             const BrakeOverrides& opts = {}) {
  if (m < 1) throw error(errc::dimension_mismatch, "m must be >= 1");
  std::mt19937_64 rng(seed);
  const auto draw_psd = [&](double shift) {
    const CMatrix c = detail::complex_gaussian(m, m, rng);
    return CMatrix(hermitian_part((c.adjoint() * c) / static_cast<double>(m)) +
                   shift * CMatrix::Identity(m, m));
  };

  CMatrix g, mm, kk, dd;
  {
    const CMatrix b = detail::complex_gaussian(m, m, rng);
    g = 0.5 * (b - b.adjoint());
    mm = draw_psd(0.1);
    kk = draw_psd(0.1);
    dd = draw_psd(0.0);
  }
  const auto check_override = [&](const std::optional<CMatrix>& o, CMatrix& dst,
                                  bool skew, bool strict, const char* name) {
    if (!o) return;
    if (o->rows() != m || o->cols() != m)
      throw error(errc::invalid_override, std::string(name) + " must be m x m");
    if (skew) {
      if (skew_deviation(*o) > 1e-12 * (1.0 + o->norm()))
        throw error(errc::invalid_override, std::string(name) + " must be skew-Hermitian");
    } else {
      if (hermitian_deviation(*o) > structure_tol(*o))
        throw error(errc::invalid_override, std::string(name) + " must be Hermitian");
      const double lmin = hermitian_eig(hermitian_part(*o)).values(0);
      if (strict ? !(lmin > 0.0) : lmin < -1e-12 * (1.0 + o->norm()))
        throw error(errc::invalid_override,
                    std::string(name) + (strict ? " must be positive definite"
                                                : " must be positive semidefinite"));
    }
    dst = *o;
  };
  check_override(opts.G, g, true, false, "G");
  check_override(opts.M, mm, false, true, "M");
  check_override(opts.K, kk, false, true, "K");
  check_override(opts.D, dd, false, false, "D");

  const Index n = 2 * m;
  DHSystem sys;
  sys.J = CMatrix::Zero(n, n);
  sys.J.topLeftCorner(m, m) = g;
  sys.J.topRightCorner(m, m) = kk;
  sys.J.bottomLeftCorner(m, m) = -kk;
  sys.R = CMatrix::Zero(n, n);
  sys.R.topLeftCorner(m, m) = hermitian_part(dd);
  sys.Q = CMatrix::Zero(n, n);
  sys.Q.topLeftCorner(m, m) = hermitian_part(mm).inverse();
  sys.Q.bottomRightCorner(m, m) = hermitian_part(kk).inverse();
  sys.Q = hermitian_part(sys.Q);
  return sys;
}

/// Generalized Rayleigh quotient guard implementing the 0/0 := 0 convention
/// for quadratic forms of PSD matrices.
inline double guarded_rq(double num, double den) {
  if (num < -1e-14 || den < -1e-14)
    throw error(errc::ill_posed, "quadratic forms of PSD matrices must be >= 0");
  if (den <= kRqZeroTol) {
    if (num <= 1e-10 * (1.0 + num)) return 0.0;
    throw error(errc::ill_posed, "vanishing denominator with nonzero numerator");
  }
  return num / den;
}

struct RadiusDiagnostics {
  bool asymptotically_stable = true;
  bool is_exact = true;            // false: singular-R lower bound (r^{S_i})
  std::string branch;              // "nepv" | "nullspace" | "exact" | "lower_bound"
  long objective_evaluations = 0;
  long failed_evaluations = 0;
  int scf_iterations = 0;
  double scf_residual = 0.0;
  bool certificate_built = false;
  bool certificate_valid = false;
  double certificate_norm_gap = 0.0;   // |joint_norm - value| / max(value, eps)
  double certificate_eig_gap = 0.0;    // min_k |lambda_k - i omega*|
  std::string notes;
};

struct RadiusResult {
  double value = 0.0;
  PerturbationClass cls = PerturbationClass::Unstructured;
  double omega_star = 0.0;
  CVector x_star;
  std::optional<PerturbationPair> certificate;
  RadiusDiagnostics diagnostics;
};

struct BackwardErrorResult {
  double eta = 0.0;
  double t0 = 0.0, t1 = 0.0;
  double g_star = 0.0;
  long evaluations = 0;
  bool lambda_is_eigenvalue = false;
  bool unbounded = false;  // g* below threshold: eta reported as +inf
};

}  // namespace dhr

#endif  // DHR_MODEL_HPP
