#ifndef DHR_RADIUS_UNSTRUCTURED_HPP
#define DHR_RADIUS_UNSTRUCTURED_HPP

#include "dhr/numerics.hpp"
#include "dhr/radius_common.hpp"

namespace dhr {

/// Transfer-function norm ||G(omega)|| with G = Q (i omega I - (J-R)Q)^{-1}.
inline double transfer_norm(const DHSystem& sys, double omega) {
  const Index n = sys.size();
  const CMatrix shifted =
      Complex(0.0, omega) * CMatrix::Identity(n, n) - sys.system_matrix();
  const CMatrix resolvent = solve_linear(shifted, CMatrix::Identity(n, n));
  return spectral_norm(sys.Q * resolvent);
}

/// Unstructured stability radius r(J,R) = (1/sqrt(2)) inf_w 1/||G(w)||.
inline RadiusResult unstructured_radius(const DHSystem& sys,
                                        const RadiusOptions& opts = {}) {
  RadiusResult res;
  res.cls = PerturbationClass::Unstructured;
  if (!detail::stability_gate(sys, res)) return res;

  const auto problem = detail::omega_problem(
      sys, opts, [&sys](double w) { return 1.0 / transfer_norm(sys, w); });
  const OmegaMinimum m = minimize(problem);
  res.value = m.value / std::sqrt(2.0);
  res.omega_star = m.omega;
  res.diagnostics.objective_evaluations = m.evaluations;
  res.diagnostics.failed_evaluations = m.failures;
  res.diagnostics.branch = "transfer_sweep";

  // Right singular vector of G(omega*) at the largest singular value.
  const Index n = sys.size();
  const CMatrix shifted =
      Complex(0.0, m.omega) * CMatrix::Identity(n, n) - sys.system_matrix();
  const CMatrix g = sys.Q * solve_linear(shifted, CMatrix::Identity(n, n));
  Eigen::JacobiSVD<CMatrix> svd(g, Eigen::ComputeThinV);
  res.x_star = svd.matrixV().col(0);
  return res;
}

}  // namespace dhr

#endif  // DHR_RADIUS_UNSTRUCTURED_HPP
