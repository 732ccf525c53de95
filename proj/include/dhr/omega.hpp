#ifndef DHR_OMEGA_HPP
#define DHR_OMEGA_HPP

#include <algorithm>
#include <functional>
#include <limits>
#include <vector>

#include "dhr/core.hpp"
#include "dhr/model.hpp"

namespace dhr {

/// Outer 1-D minimization over the frequency: seeded uniform grid sweep plus
/// golden-section refinement of the brackets around the best grid minima.
struct OmegaProblem {
  std::function<double(double)> objective;
  double lo = -1.0, hi = 1.0;
  std::vector<double> seeds;
  int grid_points = 401;  // >= 33
  double refine_tol = 1e-9;
  // Optional sequential objective used only during refinement (lets callers
  // chain warm starts without racing the parallel grid sweep).
  std::function<double(double)> refine_objective;
};

struct OmegaMinimum {
  double omega = 0.0;
  double value = std::numeric_limits<double>::infinity();
  long evaluations = 0;
  long failures = 0;
};

/// Search interval [-W, W] with W = (||J-R|| + sqrt(2) ||R||) ||Q||. The pair
/// (0, -R) is admissible in every structured class, so the optimal perturbed
/// matrix has norm at most (||J-R|| + sqrt(2)||R||)||Q||, bounding |omega|.
inline std::pair<double, double> default_interval(const DHSystem& sys) {
  const double w =
      (spectral_norm(sys.J - sys.R) + std::sqrt(2.0) * spectral_norm(sys.R)) *
      spectral_norm(sys.Q);
  return {-w, w};
}

/// Imaginary parts of the eigenvalues of (J-R)Q and JQ, deduplicated.
inline std::vector<double> seed_frequencies(const DHSystem& sys) {
  std::vector<double> seeds;
  const auto add_eigs = [&](const CMatrix& m) {
    Eigen::ComplexEigenSolver<CMatrix> es(m, false);
    for (Index i = 0; i < m.rows(); ++i) seeds.push_back(es.eigenvalues()(i).imag());
  };
  add_eigs(sys.system_matrix());
  add_eigs(sys.J * sys.Q);
  std::sort(seeds.begin(), seeds.end());
  const double w = default_interval(sys).second;
  const double spacing = 1e-8 * (1.0 + w);
  std::vector<double> out;
  for (double s : seeds)
    if (out.empty() || s - out.back() > spacing) out.push_back(s);
  return out;
}

namespace detail {

struct Sample {
  double x, f;
};

/// Golden-section descent on [a, b]; returns the best point evaluated.
/// Never assumes unimodality beyond the bracket handed to it.
template <typename Fn>
Sample golden_section(Fn&& f, double a, double b, double xtol, long& evals) {
  constexpr double inv_phi = 0.6180339887498949;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  evals += 2;
  Sample best = fc <= fd ? Sample{c, fc} : Sample{d, fd};
  for (int it = 0; it < 200 && (b - a) > xtol * (1.0 + 0.5 * std::abs(a + b)); ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
    ++evals;
    const Sample cand = fc <= fd ? Sample{c, fc} : Sample{d, fd};
    if (cand.f < best.f) best = cand;
  }
  return best;
}

}  // namespace detail

inline OmegaMinimum minimize(const OmegaProblem& problem) {
  if (!(problem.lo < problem.hi))
    throw error(errc::ill_posed, "omega interval must satisfy lo < hi");
  const int grid = std::max(problem.grid_points, 33);

  std::vector<double> points;
  points.reserve(static_cast<std::size_t>(grid) + problem.seeds.size());
  for (int i = 0; i < grid; ++i)
    points.push_back(problem.lo +
                     (problem.hi - problem.lo) * static_cast<double>(i) /
                         static_cast<double>(grid - 1));
  for (double s : problem.seeds)
    points.push_back(std::clamp(s, problem.lo, problem.hi));
  std::sort(points.begin(), points.end());

  OmegaMinimum result;
  std::vector<double> values(points.size());
  std::atomic<long> failures{0};
  const auto safe_eval = [&](const std::function<double(double)>& fn, double x) {
    try {
      const double v = fn(x);
      if (std::isfinite(v)) return v;
    } catch (const std::exception&) {
    }
    failures.fetch_add(1, std::memory_order_relaxed);
    return std::numeric_limits<double>::infinity();
  };
  detail::parallel_for(points.size(), [&](std::size_t i) {
    values[i] = safe_eval(problem.objective, points[i]);
  });
  result.evaluations = static_cast<long>(points.size());

  std::size_t best_i = 0;
  for (std::size_t i = 1; i < points.size(); ++i)
    if (values[i] < values[best_i]) best_i = i;
  if (!std::isfinite(values[best_i]))
    throw error(errc::all_evaluations_failed, "objective failed on the whole grid");
  result.omega = points[best_i];
  result.value = values[best_i];

  // Refine the bracketing cells of the three best samples.
  std::vector<std::size_t> order(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  const auto& refine_fn =
      problem.refine_objective ? problem.refine_objective : problem.objective;
  const auto seq_eval = [&](double x) { return safe_eval(refine_fn, x); };

  std::size_t refined = 0;
  std::vector<std::size_t> picked;
  for (std::size_t rank = 0; rank < order.size() && refined < 3; ++rank) {
    const std::size_t i = order[rank];
    if (!std::isfinite(values[i])) break;
    // Skip neighbors of already refined cells; they share the same basin.
    bool adjacent = false;
    for (std::size_t p : picked)
      adjacent |= (i + 1 == p || p + 1 == i || i == p);
    if (adjacent) continue;
    picked.push_back(i);
    ++refined;

    const double a = i > 0 ? points[i - 1] : points[i];
    const double b = i + 1 < points.size() ? points[i + 1] : points[i];
    if (!(b > a)) continue;
    const detail::Sample s =
        detail::golden_section(seq_eval, a, b, problem.refine_tol, result.evaluations);
    if (s.f < result.value) {
      result.value = s.f;
      result.omega = s.x;
    }
  }
  result.failures = failures.load();
  return result;
}

}  // namespace dhr

#endif  // DHR_OMEGA_HPP
