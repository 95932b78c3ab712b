#pragma once

#include "stopbound/model.hpp"

namespace stopbound {

/// Solution of a one-dimensional perpetual investment problem: the positive
/// characteristic root, the critical price, and the value-function
/// coefficient of the power branch.
struct OneDimSolution {
  double beta1;      ///< positive root of (sigma^2/2) b(b-1) + alpha b - r = 0, > 1
  double threshold;  ///< critical price (x* or y*)
  double coeff;      ///< value coefficient (A or D), > 0
};

/// Positive root of (sigma^2/2) beta (beta - 1) + alpha beta - r = 0,
/// computed with the cancellation-free quadratic formula. Requires
/// sigma > 0, r > 0, r > alpha; the result is then guaranteed > 1.
double positive_root(double alpha, double sigma, double r);

/// Threshold and coefficient for one product:
///   threshold = beta1 / ((beta1 - 1) Q) * delta * I
///   coeff     = Q / (beta1 * delta) * threshold^(1 - beta1)
OneDimSolution solve_one_dim(double quantity, double delta, double cost, double alpha,
                             double sigma, double r);

/// One-dimensional value function:
///   v(x) = coeff * x^beta1            for x < threshold
///   v(x) = Q x / delta - I            for x >= threshold
/// Value and first derivative match at the threshold by construction.
double value_one_dim(const OneDimSolution& s, double quantity, double delta, double cost,
                     double x);

/// The x-axis problem (product 1): (beta1, x*, A).
OneDimSolution product1_solution(const ModelParams& p);

/// The y-axis problem (product 2): (eta1, y*, D).
OneDimSolution product2_solution(const ModelParams& p);

}  // namespace stopbound
