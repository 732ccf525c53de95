#ifndef DHR_CORE_HPP
#define DHR_CORE_HPP

#include <atomic>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace dhr {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using Index   = Eigen::Index;

enum class errc {
  non_square,
  not_hermitian,
  not_hermitian_rhs,
  shape_mismatch,
  dimension_mismatch,
  singular,
  spectrum_conflict,
  generation_failed,
  invalid_override,
  ill_posed,
  no_such_map,
  zero_vector,
  non_differentiable_point,
  shift_overflow,
  all_evaluations_failed,
  lambda_is_eigenvalue,
  inner_unbounded,
  not_stable,
  ill_conditioned,
  not_positive_definite,
  invalid_system,
  solver_failed,
  io_error,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::non_square: return "NonSquare";
    case errc::not_hermitian: return "NotHermitian";
    case errc::not_hermitian_rhs: return "NotHermitianRHS";
    case errc::shape_mismatch: return "ShapeMismatch";
    case errc::dimension_mismatch: return "DimensionMismatch";
    case errc::singular: return "Singular";
    case errc::spectrum_conflict: return "SpectrumConflict";
    case errc::generation_failed: return "GenerationFailed";
    case errc::invalid_override: return "InvalidOverride";
    case errc::ill_posed: return "IllPosed";
    case errc::no_such_map: return "NoSuchMap";
    case errc::zero_vector: return "ZeroVector";
    case errc::non_differentiable_point: return "NonDifferentiablePoint";
    case errc::shift_overflow: return "ShiftOverflow";
    case errc::all_evaluations_failed: return "AllEvaluationsFailed";
    case errc::lambda_is_eigenvalue: return "LambdaIsEigenvalue";
    case errc::inner_unbounded: return "InnerUnbounded";
    case errc::not_stable: return "NotStable";
    case errc::ill_conditioned: return "IllConditioned";
    case errc::not_positive_definite: return "NotPositiveDefinite";
    case errc::invalid_system: return "InvalidSystem";
    case errc::solver_failed: return "SolverFailed";
    case errc::io_error: return "IOError";
  }
  return "Unknown";
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

inline double frobenius_norm(const CMatrix& a) { return a.norm(); }

/// Largest singular value (matrix 2-norm).
inline double spectral_norm(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  return a.operatorNorm();
}

inline bool all_finite(const CMatrix& a) { return a.allFinite(); }
inline bool all_finite(const CVector& v) { return v.allFinite(); }

inline CMatrix hermitian_part(const CMatrix& a) { return 0.5 * (a + a.adjoint()); }
inline CMatrix skew_part(const CMatrix& a) { return 0.5 * (a - a.adjoint()); }

/// Deviation from Hermitian symmetry, ||A - A*||_F.
inline double hermitian_deviation(const CMatrix& a) { return (a - a.adjoint()).norm(); }
inline double skew_deviation(const CMatrix& a) { return (a + a.adjoint()).norm(); }

/// Relative structure gate used throughout: 1e-12 * (1 + ||A||_F).
inline double structure_tol(const CMatrix& a) { return 1e-12 * (1.0 + a.norm()); }

namespace detail {

/// Worker cap for grid sweeps; DHRADIUS_THREADS overrides hardware concurrency.
inline unsigned thread_cap() {
  static const unsigned cap = [] {
    if (const char* env = std::getenv("DHRADIUS_THREADS")) {
      const long v = std::strtol(env, nullptr, 10);
      if (v >= 1) return static_cast<unsigned>(v);
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc != 0 ? hc : 1u;
  }();
  return cap;
}

/// Index-parallel loop. fn(i) must be exception-free and data-independent.
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(thread_cap(), count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
        if (i >= count) return;
        fn(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace detail

}  // namespace dhr

#endif  // DHR_CORE_HPP
