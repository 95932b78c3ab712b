#pragma once

#include <cstdint>
#include <vector>

#include "stopbound/model.hpp"

namespace stopbound {

/// Monte-Carlo batch configuration. Defaults: N = 1e5, antithetic off —
/// documented choices, neither is prescribed by the problem itself.
struct SamplerConfig {
  long n_samples = 100000;
  std::uint64_t seed = 1;
  bool antithetic = false;
};

/// One draw of the pair of price processes at an independent Exp(r) time.
/// y_unit_at_zeta starts from 1; the process is multiplicative, so a start
/// at y is y * y_unit_at_zeta. Rescaling (rather than redrawing) is what
/// gives common random numbers across evaluation points.
struct StateSample {
  double zeta;            ///< exponential time draw, > 0
  double x_at_zeta;       ///< X at zeta, started from the batch's x0
  double y_unit_at_zeta;  ///< Y at zeta, started from 1
};

/// Monte-Carlo mean with its standard error.
struct ValueEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  long n = 0;
};

/// Exact log-normal transition: start * exp((alpha - sigma^2/2) dt + sigma sqrt(dt) z).
double gbm_step(double start, double alpha, double sigma, double dt, double z);

/// Draws cfg.n_samples independent samples of (zeta, X_zeta, Y_zeta^unit).
/// zeta = -ln(U)/r with U uniform(0,1); the price draws use exact GBM
/// transitions, no time discretization. Sample i derives its randomness
/// from (cfg.seed, i) alone, so batches are reproducible and order-free.
/// In antithetic mode odd samples mirror (U, Z1, Z2) of their predecessor
/// as (1-U, -Z1, -Z2).
std::vector<StateSample> draw_batch(const ModelParams& p, const SamplerConfig& cfg, double x0);

/// Log-normal transition density rho(t, start, end) of a GBM with the given
/// drift and volatility. Requires t, start, end > 0.
double density_rho(double alpha, double sigma, double t, double start, double end);

}  // namespace stopbound
