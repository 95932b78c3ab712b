#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "stopbound/boundary.hpp"
#include "stopbound/model.hpp"

namespace stopbound {

/// Truncated-rectangle finite-difference configuration. Zeros mean derived
/// defaults: x_max = 2.5 x*, y_max = 2.5 y*, psor_tol = 1e-7 * I. The
/// truncation must strictly contain the free boundary's anchors
/// (x_max > 1.5 x*, y_max > 1.5 y*).
struct PdeConfig {
  double x_max = 0.0;
  double y_max = 0.0;
  int nx = 200;
  int ny = 200;
  double omega = 1.8;      ///< SOR relaxation factor, in (1, 2)
  double psor_tol = 0.0;   ///< complementarity residual target (currency units)
  int max_sweeps = 200000;
};

/// Projected SOR failed to reach the residual target.
class PsorConvergenceError : public std::runtime_error {
 public:
  PsorConvergenceError(const std::string& what, double last_residual)
      : std::runtime_error(what), last_residual_(last_residual) {}
  double last_residual() const { return last_residual_; }

 private:
  double last_residual_;
};

/// Finite-difference solution of max{(L - r) v, F - v} = 0 on the truncated
/// rectangle. values is row-major over y: values[j * nx + i] is v(xs[i], ys[j]).
struct PdeSolution {
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<double> values;
  int nx = 0;
  int ny = 0;
  int sweeps = 0;
  double max_residual = 0.0;  ///< final complementarity residual (scaled rows)

  double at(int i, int j) const { return values[static_cast<std::size_t>(j) * nx + i]; }
};

/// Solves the obstacle problem with central differences (upwinded where the
/// drift breaks diagonal dominance) and projected SOR. Dirichlet data:
/// the one-dimensional closed forms on the axes, v = F on the far edges.
PdeSolution solve_vi(const ModelParams& p, PdeConfig cfg = {});

/// Traces the contact set column by column: for each x, the smallest y node
/// where v - F < contact_tol, refined by linear interpolation, then the same
/// isotonic projection the MC solver uses. contact_tol <= 0 means 1e-6 * I.
/// Throws if a column never reaches contact (truncation too small).
Boundary extract_boundary(const PdeSolution& sol, const ModelParams& p,
                          double contact_tol = 0.0);

/// One-dimensional obstacle problem max{(L_X - r) u, (Q x / delta - I) - u} = 0
/// on [0, x_max], u(0) = 0, u(x_max) = obstacle. Solved exactly (up to the
/// discretization) by a projected tridiagonal elimination; complementarity is
/// verified post-hoc. Used as the "axis slice" cross-check of the closed forms.
struct SliceSolution {
  std::vector<double> xs;
  std::vector<double> values;
  double boundary_x = 0.0;    ///< first grid-refined contact price
  double max_residual = 0.0;  ///< verified complementarity residual
};

SliceSolution solve_vi_slice(double quantity, double delta, double cost, double alpha,
                             double sigma, double r, double x_max, int n);

}  // namespace stopbound
