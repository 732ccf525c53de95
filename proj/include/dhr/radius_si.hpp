#ifndef DHR_RADIUS_SI_HPP
#define DHR_RADIUS_SI_HPP

#include "dhr/mapping.hpp"
#include "dhr/numerics.hpp"
#include "dhr/radius_common.hpp"

namespace dhr {

/// Vertical stack G(omega) = [R Q ; i omega I - J Q] of Theorem-3.4 shape.
inline CMatrix si_stacked_pencil(const DHSystem& sys, double omega) {
  const Index n = sys.size();
  CMatrix g(2 * n, n);
  g.topRows(n) = sys.R * sys.Q;
  g.bottomRows(n) =
      Complex(0.0, omega) * CMatrix::Identity(n, n) - sys.J * sys.Q;
  return g;
}

namespace detail {

// G(omega) Q^{-1} collapses to [R ; i omega Q^{-1} - J].
struct SiContext {
  const DHSystem* sys;
  CMatrix q_inv;
};

inline SiContext make_si_context(const DHSystem& sys) {
  return {&sys, pd_inverse(sys.Q)};
}

inline SmallestSingular si_sigma(const SiContext& ctx, double omega) {
  const Index n = ctx.sys->size();
  CMatrix t(2 * n, n);
  t.topRows(n) = ctx.sys->R;
  t.bottomRows(n) = Complex(0.0, omega) * ctx.q_inv - ctx.sys->J;
  return smallest_singular(t);
}

}  // namespace detail

/// sigma_min(G(omega) Q^{-1}) and the matching right singular vector.
inline SmallestSingular si_inner(const DHSystem& sys, double omega) {
  const auto ctx = detail::make_si_context(sys);
  return detail::si_sigma(ctx, omega);
}

/// r^{S_i}(J,R): exact (with certificate) for R > 0, a certified lower bound
/// when R is singular.
inline RadiusResult si_radius(const DHSystem& sys, const RadiusOptions& opts = {}) {
  RadiusResult res;
  res.cls = PerturbationClass::S_i;
  if (!detail::stability_gate(sys, res)) return res;

  const auto ctx = detail::make_si_context(sys);
  const HermitianEig r_eig = hermitian_eig(hermitian_part(sys.R));
  const Index n = sys.size();
  const double r_rank_tol = static_cast<double>(n) *
                            std::numeric_limits<double>::epsilon() *
                            std::max(r_eig.values(n - 1), 0.0);
  const bool is_exact = r_eig.values(0) > r_rank_tol;

  const auto problem = detail::omega_problem(
      sys, opts, [&ctx](double w) { return detail::si_sigma(ctx, w).sigma; });
  const OmegaMinimum m = minimize(problem);
  res.value = m.value;
  res.omega_star = m.omega;
  res.diagnostics.objective_evaluations = m.evaluations;
  res.diagnostics.failed_evaluations = m.failures;
  res.diagnostics.is_exact = is_exact;
  res.diagnostics.branch = is_exact ? "exact" : "lower_bound";

  const SmallestSingular at_opt = detail::si_sigma(ctx, m.omega);
  const CVector x_hat = ctx.q_inv * at_opt.right_vector;
  res.x_star = x_hat / x_hat.norm();

  // The proof's optimal pair exists only in the exact branch; the singular
  // case is a lower bound with no attainment claim.
  if (is_exact && opts.build_certificate) {
    const CVector u = sys.Q * x_hat;
    const CVector target_j =
        Complex(0.0, m.omega) * x_hat - sys.J * sys.Q * x_hat;
    const MappingResult dj = min_skew_hermitian_map(u, target_j);
    const MappingResult dr = min_hermitian_map(u, CVector(-sys.R * u));
    res.certificate = make_pair(dj.map, dr.map);
    detail::verify_certificate(sys, *res.certificate, m.omega,
                               PerturbationClass::S_i, res.value, opts.cert_tol,
                               res.diagnostics);
  }
  return res;
}

}  // namespace dhr

#endif  // DHR_RADIUS_SI_HPP
