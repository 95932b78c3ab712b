#pragma once

#include <stdexcept>
#include <string>

#include "stopbound/boundary.hpp"
#include "stopbound/model.hpp"

namespace stopbound {

/// Controls for the nested adaptive quadrature. The time integral is mapped
/// through u = 1 - e^{-rt}, truncated at t_cutoff (0 means the default
/// horizon with e^{-r t} = 1e-8); the neglected tail is reported as a bound,
/// never silently dropped.
struct QuadConfig {
  double t_cutoff = 0.0;
  double rel_tol = 1e-7;
  int max_subdivisions = 12;
};

/// Requested tolerance could not be certified; carries the best estimate and
/// an error bound so callers can decide whether it is still usable.
class AccuracyError : public std::runtime_error {
 public:
  AccuracyError(const std::string& what, double best_estimate, double error_bound)
      : std::runtime_error(what), best_(best_estimate), bound_(error_bound) {}
  double best_estimate() const { return best_; }
  double error_bound() const { return bound_; }

 private:
  double best_;
  double bound_;
};

/// Deterministic evaluation of the density-form right-hand side
///   integral over t of e^{-rt} * integral over psi of rho1(t, x, psi)
///     * integral over eta >= b(psi) of (Q1 psi + Q2 eta - r I) rho2(t, y, eta),
/// i.e. the expectation inside Psi scaled by 1/r: with b == 0 it reduces to
/// the payoff F(x, y), and Psi(x, y; b) = f(x) + lambda * value. The
/// innermost integral is analytic (log-normal partial expectation); psi and
/// t are adaptive quadrature.
struct RhsEstimate {
  double value = 0.0;
  double tail_bound = 0.0;  ///< bound on the truncated t > t_cutoff remainder
};

RhsEstimate rhs_quadrature(const ModelParams& p, double x, double y, const Boundary& b,
                           const QuadConfig& q = {});

/// Fredholm kernel K(x, psi, alpha_start, beta_cut): the time integral of
/// e^{-rt} rho1(t, x, psi) times the closed-form eta integral over
/// [beta_cut, inf) started at alpha_start. Integrating K over psi with
/// alpha_start = y, beta_cut = b(psi) reproduces rhs_quadrature (Fubini).
double fredholm_kernel(const ModelParams& p, double x, double psi, double alpha_start,
                       double beta_cut, const QuadConfig& q = {});

}  // namespace stopbound
