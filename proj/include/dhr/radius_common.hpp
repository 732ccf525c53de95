#ifndef DHR_RADIUS_COMMON_HPP
#define DHR_RADIUS_COMMON_HPP

#include <optional>
#include <utility>

#include "dhr/core.hpp"
#include "dhr/model.hpp"
#include "dhr/omega.hpp"

namespace dhr {

struct RadiusOptions {
  int grid_points = 401;
  double refine_tol = 1e-9;
  std::optional<std::pair<double, double>> interval;  // overrides default_interval
  bool build_certificate = true;
  double cert_tol = 1e-6;
  // radius_sd
  int multistart = 5;
  double scf_tol = 1e-10;
  int scf_max_iter = 500;
  // radius_s inner minimization
  int eta_restarts = 6;
};

namespace detail {

/// Validates structure (throws) and applies the radius-zero convention for
/// systems that are not asymptotically stable. Returns true when the caller
/// should proceed with the sweep.
inline bool stability_gate(const DHSystem& sys, RadiusResult& res) {
  const ValidationReport rep = validate(sys);
  if (!rep.structure_valid())
    throw error(errc::invalid_system, "input is not a DH triple (J skew, R PSD, Q PD)");
  if (!rep.asymptotically_stable) {
    res.value = 0.0;
    res.diagnostics.asymptotically_stable = false;
    res.diagnostics.notes =
        "system is not asymptotically stable (max Re eigenvalue " +
        std::to_string(rep.spectral_abscissa) + "); radius is 0 by convention";
    return false;
  }
  return true;
}

inline OmegaProblem omega_problem(const DHSystem& sys, const RadiusOptions& opts,
                                  std::function<double(double)> objective) {
  OmegaProblem p;
  p.objective = std::move(objective);
  const auto iv = opts.interval ? *opts.interval : default_interval(sys);
  p.lo = iv.first;
  p.hi = iv.second;
  p.seeds = seed_frequencies(sys);
  p.grid_points = opts.grid_points;
  p.refine_tol = opts.refine_tol;
  return p;
}

/// Structure + eigenvalue-placement check of a computed perturbation pair.
inline void verify_certificate(const DHSystem& sys, const PerturbationPair& pair,
                               double omega_star, PerturbationClass claimed,
                               double value, double cert_tol,
                               RadiusDiagnostics& diag) {
  diag.certificate_built = true;
  const PerturbationClass tight = classify(sys, pair);
  const bool class_ok = class_within(tight, claimed);

  diag.certificate_norm_gap =
      std::abs(pair.norm - value) / std::max(value, 1e-300);

  const CMatrix perturbed =
      (sys.J + pair.delta_j - (sys.R + pair.delta_r)) * sys.Q;
  Eigen::ComplexEigenSolver<CMatrix> es(perturbed, false);
  double gap = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < perturbed.rows(); ++i)
    gap = std::min(gap, std::abs(es.eigenvalues()(i) - Complex(0.0, omega_star)));
  diag.certificate_eig_gap = gap;

  diag.certificate_valid =
      class_ok && gap <= cert_tol && diag.certificate_norm_gap <= cert_tol;
}

/// Q^{-1} for a validated PD Q, computed through a Cholesky solve.
inline CMatrix pd_inverse(const CMatrix& q) {
  Eigen::LLT<CMatrix> llt(hermitian_part(q));
  if (llt.info() != Eigen::Success)
    throw error(errc::not_positive_definite, "Q must be positive definite");
  return llt.solve(CMatrix::Identity(q.rows(), q.cols()));
}

}  // namespace detail

}  // namespace dhr

#endif  // DHR_RADIUS_COMMON_HPP
