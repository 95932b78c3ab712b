#include "stopbound/closed_form.hpp"

#include <cmath>
#include <stdexcept>

namespace stopbound {

double positive_root(double alpha, double sigma, double r) {
  if (!(sigma > 0.0)) throw std::invalid_argument("positive_root: sigma must be positive");
  if (!(r > 0.0)) throw std::invalid_argument("positive_root: r must be positive");
  if (!(r > alpha)) throw std::invalid_argument("positive_root: requires r > alpha");
  const double a = 0.5 * sigma * sigma;
  const double b = alpha - a;
  const double c = -r;
  // c < 0 and a > 0, so the discriminant exceeds b^2 and the positive root
  // never suffers cancellation in the branch chosen below.
  const double disc = std::sqrt(b * b - 4.0 * a * c);
  const double root = (b <= 0.0) ? (disc - b) / (2.0 * a) : (-2.0 * c) / (b + disc);
  if (!(root > 1.0)) {
    throw std::runtime_error("positive_root: root <= 1, inconsistent parameters");
  }
  return root;
}

OneDimSolution solve_one_dim(double quantity, double delta, double cost, double alpha,
                             double sigma, double r) {
  if (!(quantity > 0.0) || !(delta > 0.0) || !(cost > 0.0)) {
    throw std::invalid_argument("solve_one_dim: quantity, delta and cost must be positive");
  }
  const double beta1 = positive_root(alpha, sigma, r);
  const double threshold = beta1 / ((beta1 - 1.0) * quantity) * delta * cost;
  const double coeff = quantity / (beta1 * delta) * std::pow(threshold, 1.0 - beta1);
  return {beta1, threshold, coeff};
}

double value_one_dim(const OneDimSolution& s, double quantity, double delta, double cost,
                     double x) {
  if (!(x >= 0.0)) throw std::invalid_argument("value_one_dim: x must be nonnegative");
  if (x < s.threshold) return s.coeff * std::pow(x, s.beta1);
  return quantity * x / delta - cost;
}

OneDimSolution product1_solution(const ModelParams& p) {
  return solve_one_dim(p.q1, p.delta1, p.cost, p.alpha1, p.sigma1, p.r);
}

OneDimSolution product2_solution(const ModelParams& p) {
  return solve_one_dim(p.q2, p.delta2, p.cost, p.alpha2, p.sigma2, p.r);
}

}  // namespace stopbound
