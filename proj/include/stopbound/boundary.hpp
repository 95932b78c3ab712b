#pragma once

#include <span>
#include <utility>
#include <vector>

#include "stopbound/model.hpp"
#include "stopbound/sampler.hpp"

namespace stopbound {

/// Discretized investment boundary: piecewise-linear values on a strictly
/// increasing price grid starting at 0, with b(x) = 0 for x beyond the last
/// node. Construction checks only structure (grid shape, nonnegative,
/// non-NaN values); the solution-class conditions live in check_class_m,
/// because intermediate iterates and injected test curves legitimately
/// violate them.
class Boundary {
 public:
  Boundary(std::vector<double> xs, std::vector<double> bs);

  double operator()(double x) const;

  const std::vector<double>& grid() const { return xs_; }
  const std::vector<double>& values() const { return bs_; }
  double x_star() const { return xs_.back(); }

  /// First price at which the boundary reaches 0 (piecewise-linear zero
  /// crossing); x_star() if the boundary is positive on the whole grid.
  double first_zero() const;

 private:
  std::vector<double> xs_;
  std::vector<double> bs_;
};

/// Chebyshev-spaced nodes on [0, x_star]: denser near both endpoints where
/// the boundary's curvature concentrates. n >= 2.
std::vector<double> chebyshev_grid(double x_star, int n);

/// Initial guess b0(x) = y* (1 - x/x*)^2 on a Chebyshev grid: anchored at
/// (0, y*) and (x*, 0) with vertex at x*. This is the pure parabola; for
/// some parameter sets it dips slightly below the kill line, which the
/// first iteration's projection repairs.
Boundary initial_parabola(const ModelParams& p, int grid_size);

/// Straight line from (0, y*) to (x*, 0); alternative admissible start used
/// by the empirical-uniqueness check.
Boundary initial_line(const ModelParams& p, int grid_size);

/// In-place L2 projection onto nonincreasing sequences (pool adjacent
/// violators, uniform weights).
void project_nonincreasing(std::span<double> values);

/// Diagnostic report of the solution-class conditions for a boundary:
/// nonincreasing, discretely convex within tolerance, above max(kill line, 0),
/// above the indifference line, capped by y*, anchored at (0, y*) and (x*, 0).
struct ClassMReport {
  bool nonincreasing = true;
  bool convex = true;
  bool above_kill = true;
  bool above_indifference = true;
  bool capped = true;
  bool anchored = true;

  double worst_monotone_violation = 0.0;  ///< max rise between adjacent nodes
  double worst_concavity = 0.0;           ///< most negative probe second difference
  double worst_kill_gap = 0.0;            ///< max of max(h,0) - b over nodes
  double worst_indifference_gap = 0.0;    ///< max of f - b over nodes
  double worst_cap_excess = 0.0;          ///< max of b - y* over nodes
  double anchor_error_left = 0.0;         ///< |b(0) - y*|
  double anchor_error_right = 0.0;        ///< |b(x*)|

  bool ok() const {
    return nonincreasing && convex && above_kill && above_indifference && capped && anchored;
  }
};

/// Tolerances for check_class_m. Convexity is evaluated on a uniform probe
/// grid (second differences at spacing x*/(convex_probes-1)) because the
/// Chebyshev solver grid is too dense near the endpoints for a noise-robust
/// pointwise curvature test; the allowance is a fraction of y*.
struct ClassMTolerances {
  double anchor_rel = 1e-9;    ///< anchor slack, relative to y*
  double bound_slack = 1e-9;   ///< slack for the h / f / y* bounds, relative to y*
  double mono_slack = 1e-9;    ///< monotonicity slack, relative to y*
  double convex_frac = 0.02;   ///< concavity allowance as a fraction of y*
  int convex_probes = 21;
};

ClassMReport check_class_m(const Boundary& b, const ModelParams& p,
                           const ClassMTolerances& tol = {});

/// Monte-Carlo evaluation of the integral-equation operator
///   Psi(x, y; b) = f(x) + (lambda / r) E[(Q1 X + Q2 Y - r I) 1{Y >= b(X)}]
/// over a batch drawn with x0 = 1: the samples are rescaled by x and y, so
/// one batch serves every evaluation point (common random numbers). The
/// indicator uses non-strict >=; the event has probability zero.
ValueEstimate psi_over_batch(const ModelParams& p, double x, double y, const Boundary& b,
                             std::span<const StateSample> unit_batch);

/// psi_over_batch with a batch freshly drawn from cfg.
ValueEstimate psi(const ModelParams& p, double x, double y, const Boundary& b,
                  const SamplerConfig& cfg);

/// One fixed-point sweep: evaluates Psi at every grid node with y = b_prev
/// there, then restores the solution class — clamp to [max(h, 0), y*],
/// isotonic projection, clamp again, re-anchor the endpoints to (0, y*) and
/// (x*, 0). relaxation theta in (0, 1] blends theta * Psi + (1 - theta) * b_prev
/// before projecting; 1 means no damping.
Boundary iterate_once(const ModelParams& p, const Boundary& b_prev, const SamplerConfig& cfg,
                      double relaxation = 1.0);

/// Convergence and residual diagnostics of a solve.
struct SolveReport {
  int iterations = 0;
  bool converged = false;
  std::vector<double> sup_change_history;  ///< per-iteration sup-norm change

  // Fixed-point residual |b - Psi(., b(.); b)| on an independent fresh-seed
  // batch, per grid node, with the estimator's standard errors.
  std::vector<double> residual_abs;
  std::vector<double> residual_se;
  double residual_sup_interior = 0.0;  ///< sup of residual_abs over interior nodes
  double residual_max_se = 0.0;        ///< max of residual_se over interior nodes
};

enum class InitialGuess { kParabola, kLine };

struct SolveOptions {
  int grid_size = 40;
  double tol = 0.0;  ///< sup-change stopping level; <= 0 means 0.005 * y*
  int max_iter = 50;
  double relaxation = 1.0;
  InitialGuess initial = InitialGuess::kParabola;
};

/// Runs the fixed-point iteration from the configured initial guess until
/// the sup-norm change between sweeps falls below tol or max_iter is hit.
/// Iteration k uses a batch seeded by derive_seed(cfg.seed, k); the residual
/// pass uses its own derived seed. Non-convergence is reported, not thrown.
/// Identical inputs give bit-identical results regardless of thread count.
std::pair<Boundary, SolveReport> solve_boundary(const ModelParams& p, const SolveOptions& opts,
                                                const SamplerConfig& cfg);

}  // namespace stopbound
