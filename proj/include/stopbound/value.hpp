#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "stopbound/boundary.hpp"
#include "stopbound/model.hpp"
#include "stopbound/sampler.hpp"

namespace stopbound {

/// Monte-Carlo estimate of the value function through its probabilistic
/// representation: (1/r) E[(Q1 X + Q2 Y - r I) 1{Y >= b(X)}] at an
/// independent Exp(r) time, using a unit-start batch rescaled by (x, y).
/// With a shared seed the estimate is therefore exactly monotone in x and y
/// (common random numbers), not merely statistically so.
ValueEstimate estimate_value(const ModelParams& p, double x, double y, const Boundary& b,
                             const SamplerConfig& cfg);

struct MartingaleConfig {
  int n_outer = 2000;
  int n_inner = 2000;
  std::uint64_t seed = 1;
};

struct HorizonCheck {
  double horizon = 0.0;
  double martingale_mean = 0.0;  ///< estimate of E[e^{-rt} V(X_t, Y_t) + discounted flow]
  double martingale_se = 0.0;
  double reference_mean = 0.0;   ///< V estimate at the starting point
  double reference_se = 0.0;
  double z = 0.0;
};

/// Consistency check of the value estimator: the process
///   e^{-rt} V(X_t, Y_t) + integral_0^t e^{-rs} H(X_s, Y_s) ds
/// has constant expectation. For each horizon the outer expectation is
/// estimated from n_outer exact-transition paths; V at the horizon state is
/// a nested estimate with n_inner samples (its noise widens the reported
/// standard error rather than failing). The truncated time integral uses
/// the exponential-time identity, so it carries no quadrature bias. A zero
/// horizon returns z = 0 identically.
std::vector<HorizonCheck> martingale_check(const ModelParams& p, double x, double y,
                                           const Boundary& b, std::span<const double> horizons,
                                           const MartingaleConfig& cfg);

/// Diagnostic variant with the running-payoff indicator taken from a
/// different boundary than the value estimates. With payoff_b == value_b the
/// statistic is centered for any boundary (tower property), so only a
/// mismatch between the two sides produces drift; this is what gives the
/// check power against a wrong boundary.
std::vector<HorizonCheck> martingale_check_mixed(const ModelParams& p, double x, double y,
                                                 const Boundary& value_b,
                                                 const Boundary& payoff_b,
                                                 std::span<const double> horizons,
                                                 const MartingaleConfig& cfg);

}  // namespace stopbound
