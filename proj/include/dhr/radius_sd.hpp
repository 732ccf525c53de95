#ifndef DHR_RADIUS_SD_HPP
#define DHR_RADIUS_SD_HPP

#include <vector>

#include "dhr/mapping.hpp"
#include "dhr/numerics.hpp"
#include "dhr/radius_common.hpp"

namespace dhr {

/// Frozen data of the inner r^{S_d} problem at one frequency, in the
/// y = Qx coordinates: f(y) = rq(y*R^2 y, y*R y)^2 + y*P y on the unit sphere,
/// with P = Q^{-1} (i w I - JQ)* (i w I - JQ) Q^{-1}.
struct SdObjective {
  double omega = 0.0;
  CMatrix P, R, R2;
};

inline SdObjective make_sd_objective(const DHSystem& sys, double omega) {
  SdObjective obj;
  obj.omega = omega;
  const CMatrix q_inv = detail::pd_inverse(sys.Q);
  const CMatrix z = Complex(0.0, omega) * q_inv - sys.J;  // (i w I - JQ) Q^{-1}
  obj.P = hermitian_part(z.adjoint() * z);
  obj.R = hermitian_part(sys.R);
  obj.R2 = hermitian_part(obj.R * obj.R);
  return obj;
}

inline double sd_objective_value(const SdObjective& obj, const CVector& y) {
  const double num = std::max(y.dot(obj.R2 * y).real(), 0.0);
  const double den = std::max(y.dot(obj.R * y).real(), 0.0);
  const double rq = guarded_rq(num, den);
  return rq * rq + y.dot(obj.P * y).real();
}

/// Eigenvector-dependent coefficient matrix of the NEPv characterization:
/// H(x) = 2 (x*R^2x / (x*Rx)^2) R^2 - 2 ((x*R^2x)^2 / (x*Rx)^3) R + P.
inline CMatrix nepv_matrix(const CVector& x, const SdObjective& obj) {
  const double a = x.dot(obj.R2 * x).real();
  const double b = x.dot(obj.R * x).real();
  if (b <= kRqZeroTol)
    throw error(errc::non_differentiable_point,
                "x*Rx vanishes; route to the nullspace branch");
  CMatrix h = (2.0 * a / (b * b)) * obj.R2 - (2.0 * a * a / (b * b * b)) * obj.R +
              obj.P;
  return hermitian_part(h);
}

struct NEPvState {
  CVector x;
  double h_value = 0.0;
  double residual = 0.0;
  double shift_used = 0.0;
  int iteration = 0;
  bool converged = false;
  bool monotone = true;
  bool hit_nondifferentiable = false;
};

namespace detail {

inline void fix_phase(CVector& x) {
  Index imax = 0;
  x.cwiseAbs().maxCoeff(&imax);
  const Complex pivot = x(imax);
  if (std::abs(pivot) > 0.0) x *= std::conj(pivot) / std::abs(pivot);
}

inline double one_norm(const CMatrix& a) {
  return a.cwiseAbs().colwise().sum().maxCoeff();
}

}  // namespace detail

/// Level-shifted SCF iteration for the NEPv H(x) x = mu x (smallest eigenpair).
/// Shifts are escalated 0, 2 d, 4 d, 8 d, ... until the objective decreases;
/// d is the gap between the two smallest eigenvalues of H(x_k).
inline NEPvState scf_solve(const SdObjective& obj, const CVector& x0,
                           double tol = 1e-10, int max_iter = 500) {
  if (x0.norm() == 0.0) throw error(errc::zero_vector, "x0 must be nonzero");
  NEPvState state;
  state.x = x0 / x0.norm();
  detail::fix_phase(state.x);
  if (state.x.dot(obj.R * state.x).real() <= kRqZeroTol)
    throw error(errc::non_differentiable_point, "x0*R x0 vanishes");

  state.h_value = sd_objective_value(obj, state.x);
  for (int k = 0; k < max_iter; ++k) {
    state.iteration = k;
    CMatrix h;
    try {
      h = nepv_matrix(state.x, obj);
    } catch (const error& e) {
      if (e.code() != errc::non_differentiable_point) throw;
      state.hit_nondifferentiable = true;
      return state;
    }
    const double s = state.x.dot(h * state.x).real();
    state.residual = (h * state.x - s * state.x).norm() / (detail::one_norm(h) + 1.0);
    if (state.residual <= tol) {
      state.converged = true;
      return state;
    }

    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    const double gap = es.eigenvalues()(std::min<Index>(1, h.rows() - 1)) -
                       es.eigenvalues()(0);
    const double delta = std::max(gap, 1e-8 * (1.0 + detail::one_norm(h)));

    bool accepted = false;
    double sigma = 0.0;
    for (int j = 0; j <= 60; ++j) {
      CVector candidate;
      if (j == 0) {
        candidate = es.eigenvectors().col(0);
      } else {
        sigma = std::ldexp(delta, j);  // 2^j * delta
        Eigen::SelfAdjointEigenSolver<CMatrix> shifted(
            CMatrix(h + sigma * (state.x * state.x.adjoint())));
        candidate = shifted.eigenvectors().col(0);
      }
      detail::fix_phase(candidate);
      const double h_next = sd_objective_value(obj, candidate);
      if (h_next < state.h_value) {
        state.x = candidate;
        state.h_value = h_next;
        state.shift_used = j == 0 ? 0.0 : sigma;
        accepted = true;
        break;
      }
    }
    if (!accepted)
      throw error(errc::shift_overflow, "no objective decrease after 60 doublings");
  }
  // MaxIterations: best iterate still returned, flagged via converged=false.
  return state;
}

enum class SdBranch { NEPv, Nullspace };

struct SdInnerResult {
  double value = std::numeric_limits<double>::infinity();
  CVector y;  // unit minimizer in the y = Qx coordinates
  SdBranch branch = SdBranch::NEPv;
  int scf_iterations = 0;
  double scf_residual = 0.0;
  bool scf_converged = false;
  int starts_converged = 0;
  int starts_run = 0;
};

namespace detail {

struct SdContext {
  const DHSystem* sys;
  CMatrix q_inv;
  CMatrix r, r2;
  CMatrix jq;
  CVector r_min_vec;  // eigenvector of R for the smallest eigenvalue
  double r_lmin = 0.0, r_lmax = 0.0;
  bool r_singular = false;
  CMatrix null_r;  // orthonormal nullspace basis of R (may be empty)
};

inline SdContext make_sd_context(const DHSystem& sys) {
  SdContext ctx;
  ctx.sys = &sys;
  ctx.q_inv = pd_inverse(sys.Q);
  ctx.r = hermitian_part(sys.R);
  ctx.r2 = hermitian_part(ctx.r * ctx.r);
  ctx.jq = sys.J * sys.Q;
  const HermitianEig re = hermitian_eig(ctx.r);
  ctx.r_min_vec = re.vectors.col(0);
  ctx.r_lmin = re.values(0);
  ctx.r_lmax = re.values(sys.size() - 1);
  const double rank_tol = static_cast<double>(sys.size()) *
                          std::numeric_limits<double>::epsilon() *
                          std::max(ctx.r_lmax, 0.0);
  ctx.r_singular = !(ctx.r_lmin > rank_tol);
  if (ctx.r_singular) ctx.null_r = nullspace_basis(ctx.r);
  return ctx;
}

inline SdObjective sd_objective_at(const SdContext& ctx, double omega) {
  SdObjective obj;
  obj.omega = omega;
  const CMatrix z = Complex(0.0, omega) * ctx.q_inv - ctx.sys->J;
  obj.P = hermitian_part(z.adjoint() * z);
  obj.R = ctx.r;
  obj.R2 = ctx.r2;
  return obj;
}

inline SdInnerResult sd_inner_impl(const SdContext& ctx, double omega,
                                   const RadiusOptions& opts) {
  const Index n = ctx.sys->size();
  SdObjective obj = sd_objective_at(ctx, omega);

  // Multistart seeds: the R-eigenvector for d_n in both coordinate systems,
  // the smallest eigenvector of P, then deterministic random fill.
  std::vector<CVector> seeds;
  seeds.push_back(ctx.r_min_vec);
  {
    CVector lit = ctx.q_inv * ctx.r_min_vec;
    if (lit.norm() > 0) seeds.push_back(lit / lit.norm());
  }
  seeds.push_back(hermitian_eig(obj.P).vectors.col(0));
  std::mt19937_64 rng(0x5eedULL);
  while (static_cast<int>(seeds.size()) < std::max(opts.multistart, 1)) {
    CVector v = complex_gaussian_vector(n, rng);
    seeds.push_back(v / v.norm());
  }

  SdInnerResult best;
  for (const CVector& seed : seeds) {
    if (best.starts_run >= std::max(opts.multistart, 1)) break;
    CVector x = seed / seed.norm();
    if (x.dot(obj.R * x).real() <= kRqZeroTol) continue;  // nullspace branch's job
    ++best.starts_run;
    NEPvState state;
    try {
      state = scf_solve(obj, x, opts.scf_tol, opts.scf_max_iter);
    } catch (const error& e) {
      if (e.code() == errc::shift_overflow) continue;
      throw;
    }
    if (state.converged) ++best.starts_converged;
    // Any unit iterate is a valid upper bound for the inner infimum, so even
    // non-converged runs may contribute the candidate value.
    if (state.h_value < best.value) {
      best.value = state.h_value;
      best.y = state.x;
      best.branch = SdBranch::NEPv;
      best.scf_iterations = state.iteration;
      best.scf_residual = state.residual;
      best.scf_converged = state.converged;
    }
  }

  if (ctx.r_singular && ctx.null_r.cols() > 0) {
    const CMatrix w = hermitian_part(
        CMatrix(ctx.null_r.adjoint() * obj.P * ctx.null_r));
    const HermitianEig we = hermitian_eig(w);
    const double value_b = we.values(0);
    if (value_b < best.value) {
      CVector y = ctx.null_r * we.vectors.col(0);
      best.value = value_b;
      best.y = y / y.norm();
      best.branch = SdBranch::Nullspace;
      best.scf_converged = true;  // exact eigensolve, no iteration involved
      best.scf_iterations = 0;
      best.scf_residual = 0.0;
    }
  }

  if (!best.y.size())
    throw error(errc::all_evaluations_failed,
                "no admissible start for the inner r^{S_d} problem");
  return best;
}

}  // namespace detail

/// Inner problem of Theorem-3.1 shape at a fixed frequency: the NEPv/SCF
/// branch raced against the nullspace branch available for singular R.
inline detail::SdInnerResult sd_inner(const DHSystem& sys, double omega,
                                      const RadiusOptions& opts = {}) {
  const auto ctx = detail::make_sd_context(sys);
  return detail::sd_inner_impl(ctx, omega, opts);
}

/// r^{S_d}(J,R) = sqrt( inf_w inf_{|y|=1} f(y) ), with the optimal
/// perturbation pair assembled from the minimizer.
inline RadiusResult sd_radius(const DHSystem& sys, const RadiusOptions& opts = {}) {
  RadiusResult res;
  res.cls = PerturbationClass::S_d;
  if (!detail::stability_gate(sys, res)) return res;

  const auto ctx = detail::make_sd_context(sys);
  const auto problem = detail::omega_problem(sys, opts, [&](double w) {
    return detail::sd_inner_impl(ctx, w, opts).value;
  });
  const OmegaMinimum m = minimize(problem);
  res.value = std::sqrt(std::max(m.value, 0.0));
  res.omega_star = m.omega;
  res.diagnostics.objective_evaluations = m.evaluations;
  res.diagnostics.failed_evaluations = m.failures;

  const detail::SdInnerResult inner = detail::sd_inner_impl(ctx, m.omega, opts);
  res.diagnostics.branch =
      inner.branch == detail::SdBranch::NEPv ? "nepv" : "nullspace";
  res.diagnostics.scf_iterations = inner.scf_iterations;
  res.diagnostics.scf_residual = inner.scf_residual;

  CVector x_star = ctx.q_inv * inner.y;
  x_star /= x_star.norm();
  res.x_star = x_star;

  if (opts.build_certificate) {
    const MappingResult dr = min_negsemidef_map(sys.R, sys.Q, x_star);
    const CVector u = sys.Q * x_star;
    const CVector target_j = Complex(0.0, m.omega) * x_star - ctx.jq * x_star;
    const MappingResult dj = min_skew_hermitian_map(u, target_j);
    res.certificate = make_pair(dj.map, dr.map);
    detail::verify_certificate(sys, *res.certificate, m.omega,
                               PerturbationClass::S_d, res.value, opts.cert_tol,
                               res.diagnostics);
  }
  return res;
}

/// Corollary-3.2 sandwich on the squared radius.
struct SdBounds {
  double lower = 0.0;
  double upper = 0.0;
  double d_n = 0.0;     // smallest eigenvalue of R
  CVector x_hat;        // Q^{-1} (eigenvector of R for d_n)
  double omega_lower = 0.0;
  double omega_upper = 0.0;
};

inline SdBounds sd_bounds(const DHSystem& sys, const RadiusOptions& opts = {}) {
  const ValidationReport rep = validate(sys);
  if (!rep.structure_valid())
    throw error(errc::invalid_system, "input is not a DH triple");

  const auto ctx = detail::make_sd_context(sys);
  SdBounds bounds;
  bounds.d_n = std::max(ctx.r_lmin, 0.0);
  bounds.x_hat = ctx.q_inv * ctx.r_min_vec;

  // lower: d_n^2 + inf_w lambda_min(P(w)); lambda_min(P) = sigma_min(Z)^2.
  {
    const auto problem = detail::omega_problem(sys, opts, [&](double w) {
      const CMatrix z = Complex(0.0, w) * ctx.q_inv - sys.J;
      const double s = smallest_singular(z).sigma;
      return s * s;
    });
    const OmegaMinimum m = minimize(problem);
    bounds.lower = bounds.d_n * bounds.d_n + m.value;
    bounds.omega_lower = m.omega;
  }
  // upper: d_n^2 + inf_w ||(i w I - JQ) x_hat||^2 / ||Q x_hat||^2.
  {
    const CVector qx = sys.Q * bounds.x_hat;
    const CVector jqx = ctx.jq * bounds.x_hat;
    const double qn2 = qx.squaredNorm();
    const CVector& xh = bounds.x_hat;
    const auto problem = detail::omega_problem(sys, opts, [&, qn2](double w) {
      return (Complex(0.0, w) * xh - jqx).squaredNorm() / qn2;
    });
    const OmegaMinimum m = minimize(problem);
    bounds.upper = bounds.d_n * bounds.d_n + m.value;
    bounds.omega_upper = m.omega;
  }
  return bounds;
}

}  // namespace dhr

#endif  // DHR_RADIUS_SD_HPP
