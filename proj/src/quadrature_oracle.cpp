#include "stopbound/quadrature_oracle.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>

namespace stopbound {

namespace {

constexpr double kSqrt2Pi = 2.50662827463100050242;

double normal_cdf(double z) { return 0.5 * std::erfc(-z * 0.70710678118654752440); }

double default_cutoff(const ModelParams& p) { return -std::log(1e-8) / p.r; }

/// Closed-form inner integral over eta in [cut, inf) of
/// (Q1 psi + Q2 eta - r I) rho2(t, y_start, eta), via log-normal tail
/// identities. Degenerate starts and cuts are handled exactly.
double stopping_flow_tail(const ModelParams& p, double t, double psi, double y_start,
                          double cut) {
  const double base = p.q1 * psi - p.r * p.cost;
  if (std::isinf(cut)) return 0.0;
  if (y_start <= 0.0) {
    // Y is frozen at 0; the indicator is 1 iff the cut is at or below 0.
    return cut <= 0.0 ? base : 0.0;
  }
  const double grown = p.q2 * y_start * std::exp(p.alpha2 * t);
  if (cut <= 0.0) return base + grown;
  if (t <= 0.0) return y_start >= cut ? base + p.q2 * y_start : 0.0;
  const double s = p.sigma2 * std::sqrt(t);
  const double d2 = (std::log(y_start / cut) + (p.alpha2 - 0.5 * p.sigma2 * p.sigma2) * t) / s;
  return base * normal_cdf(d2) + grown * normal_cdf(d2 + s);
}

/// E[flow tail at (X_t, cut = b(X_t))] for X started at x: the psi integral
/// written as a standard-normal expectation over z with
/// psi = x exp((alpha1 - sigma1^2/2) t + sigma1 sqrt(t) z).
double expected_flow(const ModelParams& p, double t, double x, double y, const Boundary& b,
                     const QuadConfig& q, double scale) {
  if (x <= 0.0 || t <= 0.0) {
    const double psi = x;
    return stopping_flow_tail(p, t, psi, y, b(psi));
  }
  const double s1 = p.sigma1 * std::sqrt(t);
  const double drift = (p.alpha1 - 0.5 * p.sigma1 * p.sigma1) * t;
  const auto integrand = [&](double z) {
    const double psi = x * std::exp(drift + s1 * z);
    return std::exp(-0.5 * z * z) / kSqrt2Pi * stopping_flow_tail(p, t, psi, y, b(psi));
  };
  // The integrand decays like exp(-z^2/2 + s1 z); 10 + s1 leaves negligible mass.
  const double span = 10.0 + s1;
  double error = 0.0;
  const double inner =
      boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
          integrand, -span, span, q.max_subdivisions, 0.1 * q.rel_tol, &error);
  if (!(error <= 0.1 * q.rel_tol * std::max(std::abs(inner), 1e-6 * scale) * 10.0)) {
    throw AccuracyError("rhs_quadrature: inner integral tolerance not reached", inner, error);
  }
  return inner;
}

double problem_scale(const ModelParams& p, double x, double y) {
  return p.q1 * x / p.delta1 + p.q2 * y / p.delta2 + p.cost;
}

double tail_bound_beyond(const ModelParams& p, double x, double y, double t_cutoff) {
  return p.q1 * x * std::exp(-p.delta1 * t_cutoff) / p.delta1 +
         p.q2 * y * std::exp(-p.delta2 * t_cutoff) / p.delta2 +
         p.cost * std::exp(-p.r * t_cutoff);
}

}  // namespace

RhsEstimate rhs_quadrature(const ModelParams& p, double x, double y, const Boundary& b,
                           const QuadConfig& q) {
  if (!(x >= 0.0) || !(y >= 0.0)) {
    throw std::invalid_argument("rhs_quadrature: point must be in the closed quadrant");
  }
  if (!(q.rel_tol > 0.0) || q.rel_tol > 1e-2) {
    throw std::invalid_argument("rhs_quadrature: rel_tol must be in (0, 1e-2]");
  }
  const double t_cutoff = q.t_cutoff > 0.0 ? q.t_cutoff : default_cutoff(p);
  const double u_max = 1.0 - std::exp(-p.r * t_cutoff);
  const double scale = problem_scale(p, x, y);

  // u = 1 - e^{-rt} turns the discounted time integral into a plain integral
  // over (0, u_max): value = (1/r) * integral of expected_flow(t(u)) du.
  const auto integrand = [&](double u) {
    const double t = -std::log1p(-u) / p.r;
    return expected_flow(p, t, x, y, b, q, scale);
  };
  boost::math::quadrature::tanh_sinh<double> integrator(
      static_cast<std::size_t>(q.max_subdivisions));
  double error = 0.0;
  double l1 = 0.0;
  std::size_t levels = 0;
  const double integral = integrator.integrate(integrand, 0.0, u_max, q.rel_tol, &error, &l1,
                                               &levels);
  const double value = integral / p.r;
  if (levels >= static_cast<std::size_t>(q.max_subdivisions) &&
      !(error <= q.rel_tol * std::max(std::abs(integral), 1e-6 * scale))) {
    throw AccuracyError("rhs_quadrature: time integral tolerance not reached", value,
                        error / p.r);
  }
  return {value, tail_bound_beyond(p, x, y, t_cutoff)};
}

double fredholm_kernel(const ModelParams& p, double x, double psi, double alpha_start,
                       double beta_cut, const QuadConfig& q) {
  if (!(psi > 0.0)) throw std::invalid_argument("fredholm_kernel: psi must be positive");
  if (!(alpha_start > 0.0)) {
    throw std::invalid_argument("fredholm_kernel: alpha_start must be positive");
  }
  if (!(x > 0.0)) throw std::invalid_argument("fredholm_kernel: x must be positive");
  if (std::isinf(beta_cut)) return 0.0;
  const double t_cutoff = q.t_cutoff > 0.0 ? q.t_cutoff : default_cutoff(p);
  const double u_max = 1.0 - std::exp(-p.r * t_cutoff);
  const double scale = problem_scale(p, x, alpha_start);

  const double log_ratio = std::log(psi / x);
  const double mu1 = p.alpha1 - 0.5 * p.sigma1 * p.sigma1;
  const auto integrand = [&](double u) {
    const double t = -std::log1p(-u) / p.r;
    if (t <= 0.0) return 0.0;
    const double s = p.sigma1 * std::sqrt(t);
    const double m = log_ratio - mu1 * t;
    const double rho1 = std::exp(-m * m / (2.0 * s * s)) / (psi * s * kSqrt2Pi);
    if (rho1 == 0.0) return 0.0;
    return rho1 * stopping_flow_tail(p, t, psi, alpha_start, beta_cut);
  };
  boost::math::quadrature::tanh_sinh<double> integrator(
      static_cast<std::size_t>(q.max_subdivisions));
  double error = 0.0;
  double l1 = 0.0;
  std::size_t levels = 0;
  const double integral = integrator.integrate(integrand, 0.0, u_max, q.rel_tol, &error, &l1,
                                               &levels);
  if (levels >= static_cast<std::size_t>(q.max_subdivisions) &&
      !(error <= q.rel_tol * std::max(std::abs(integral), 1e-9 * scale))) {
    throw AccuracyError("fredholm_kernel: time integral tolerance not reached", integral / p.r,
                        error / p.r);
  }
  return integral / p.r;
}

}  // namespace stopbound
