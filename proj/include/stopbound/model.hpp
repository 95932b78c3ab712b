#pragma once

#include <filesystem>
#include <istream>

namespace stopbound {

/// Market and project constants of the two-product investment problem,
/// plus the derived net discount rates and the Fredholm constant.
///
/// All quantities are plain reals: prices and the sunk cost share one
/// currency unit, rates are per unit time, volatilities per sqrt(unit time).
/// Instances are immutable after construction and safe to share across
/// threads.
struct ModelParams {
  double r;       ///< discount rate
  double alpha1;  ///< drift of the first product's price
  double alpha2;  ///< drift of the second product's price
  double sigma1;  ///< volatility of the first product's price
  double sigma2;  ///< volatility of the second product's price
  double q1;      ///< output quantity of the first product
  double q2;      ///< output quantity of the second product
  double cost;    ///< sunk investment cost I

  // Derived, stored once so there is a single source of truth.
  double delta1;  ///< r - alpha1
  double delta2;  ///< r - alpha2
  double lambda;  ///< delta2 / q2

  /// Validates r > max(alpha1, alpha2), positivity of sigma/q/I/r, and
  /// fills the derived members. Throws std::invalid_argument on violation.
  ModelParams(double r, double alpha1, double alpha2, double sigma1, double sigma2,
              double q1, double q2, double cost);
};

/// Immediate-investment value F(x, y) = Q1 x / delta1 + Q2 y / delta2 - I.
/// Affine in (x, y); F(0, 0) = -I.
double payoff(const ModelParams& p, double x, double y);

/// Indifference line f(x) = (delta2/Q2) (I - Q1 x / delta1): the price of the
/// second product at which F(x, f(x)) = 0. Strictly decreasing in x.
double indifference_line(const ModelParams& p, double x);

/// Kill line h(x) = (r I - Q1 x) / Q2, the zero set of the drift of the
/// discounted payoff. May be negative for large x; callers clamp at 0 where
/// an actual price is needed.
double kill_line(const ModelParams& p, double x);

/// Reads parameters from a line-based `key = value` UTF-8 stream with keys
/// exactly {r, alpha1, alpha2, sigma1, sigma2, Q1, Q2, I}. Blank lines and
/// `#` comments are skipped. Unknown, duplicate, or missing keys are errors
/// (std::invalid_argument with the offending line number where applicable).
ModelParams parse_model_config(std::istream& in);

/// parse_model_config over a file; errors mention the path.
ModelParams load_model_config(const std::filesystem::path& path);

}  // namespace stopbound
