#include "stopbound/pde_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stopbound/closed_form.hpp"

namespace stopbound {

namespace {

struct Stencil {
  double plus = 0.0;   // coefficient of the neighbor in +direction
  double minus = 0.0;  // coefficient of the neighbor in -direction
  double diag = 0.0;   // contribution to the diagonal (negative)
};

/// Second-order stencil for (sigma^2 z^2 / 2) d^2/dz^2 + alpha z d/dz at
/// position z and spacing h. Central differencing unless it would produce a
/// negative off-diagonal weight; then one-sided (upwind) drift.
Stencil direction_stencil(double z, double h, double sigma, double alpha) {
  const double diff = 0.5 * sigma * sigma * z * z / (h * h);
  const double drift = alpha * z;
  Stencil st;
  if (diff >= std::abs(drift) / (2.0 * h)) {  // both central off-diagonals stay >= 0
    st.plus = diff + drift / (2.0 * h);
    st.minus = diff - drift / (2.0 * h);
    st.diag = -2.0 * diff;
  } else if (drift >= 0.0) {
    st.plus = diff + drift / h;
    st.minus = diff;
    st.diag = -2.0 * diff - drift / h;
  } else {
    st.plus = diff;
    st.minus = diff - drift / h;
    st.diag = -2.0 * diff + drift / h;
  }
  return st;
}

}  // namespace

PdeSolution solve_vi(const ModelParams& p, PdeConfig cfg) {
  const OneDimSolution sol1 = product1_solution(p);
  const OneDimSolution sol2 = product2_solution(p);
  if (cfg.x_max <= 0.0) cfg.x_max = 2.5 * sol1.threshold;
  if (cfg.y_max <= 0.0) cfg.y_max = 2.5 * sol2.threshold;
  if (cfg.psor_tol <= 0.0) cfg.psor_tol = 1e-7 * p.cost;
  if (!(cfg.x_max > 1.5 * sol1.threshold) || !(cfg.y_max > 1.5 * sol2.threshold)) {
    throw std::invalid_argument("solve_vi: truncation must exceed 1.5x the anchors");
  }
  if (cfg.nx < 50 || cfg.ny < 50) {
    throw std::invalid_argument("solve_vi: need nx, ny >= 50");
  }
  if (!(cfg.omega > 1.0) || !(cfg.omega < 2.0)) {
    throw std::invalid_argument("solve_vi: omega must be in (1, 2)");
  }

  const int nx = cfg.nx;
  const int ny = cfg.ny;
  const double hx = cfg.x_max / (nx - 1);
  const double hy = cfg.y_max / (ny - 1);

  PdeSolution out;
  out.nx = nx;
  out.ny = ny;
  out.xs.resize(nx);
  out.ys.resize(ny);
  for (int i = 0; i < nx; ++i) out.xs[i] = i * hx;
  for (int j = 0; j < ny; ++j) out.ys[j] = j * hy;

  std::vector<double> obstacle(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      obstacle[static_cast<std::size_t>(j) * nx + i] = payoff(p, out.xs[i], out.ys[j]);
    }
  }

  std::vector<double>& v = out.values;
  v.resize(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      v[static_cast<std::size_t>(j) * nx + i] =
          std::max(obstacle[static_cast<std::size_t>(j) * nx + i], 0.0);
    }
  }
  // Dirichlet data: one-dimensional closed forms on the degenerate axes,
  // v = F deep in the stopping region on the far edges.
  for (int i = 0; i < nx; ++i) {
    v[i] = value_one_dim(sol1, p.q1, p.delta1, p.cost, out.xs[i]);
    v[static_cast<std::size_t>(ny - 1) * nx + i] = payoff(p, out.xs[i], cfg.y_max);
  }
  for (int j = 0; j < ny; ++j) {
    v[static_cast<std::size_t>(j) * nx] = value_one_dim(sol2, p.q2, p.delta2, p.cost, out.ys[j]);
    v[static_cast<std::size_t>(j) * nx + nx - 1] = payoff(p, cfg.x_max, out.ys[j]);
  }

  std::vector<Stencil> sx(nx);
  for (int i = 1; i < nx - 1; ++i) sx[i] = direction_stencil(out.xs[i], hx, p.sigma1, p.alpha1);
  std::vector<Stencil> sy(ny);
  for (int j = 1; j < ny - 1; ++j) sy[j] = direction_stencil(out.ys[j], hy, p.sigma2, p.alpha2);

  const auto scaled_residual = [&](double& comp_max) {
    comp_max = 0.0;
    for (int j = 1; j < ny - 1; ++j) {
      for (int i = 1; i < nx - 1; ++i) {
        const std::size_t k = static_cast<std::size_t>(j) * nx + i;
        const double diag = sx[i].diag + sy[j].diag - p.r;
        const double row = (sx[i].plus * v[k + 1] + sx[i].minus * v[k - 1] +
                            sy[j].plus * v[k + nx] + sy[j].minus * v[k - nx] + diag * v[k]) /
                           -diag;
        const double gap = v[k] - obstacle[k];
        // VI in scaled row units: row <= 0 up to tolerance, gap >= 0 (exact
        // after projection), and one of the two active.
        comp_max = std::max(comp_max, std::max(row, std::min(gap, -row)));
      }
    }
  };

  double residual = std::numeric_limits<double>::infinity();
  int sweep = 0;
  const int check_every = 16;
  while (sweep < cfg.max_sweeps) {
    for (int pass = 0; pass < check_every && sweep < cfg.max_sweeps; ++pass, ++sweep) {
      for (int j = 1; j < ny - 1; ++j) {
        for (int i = 1; i < nx - 1; ++i) {
          const std::size_t k = static_cast<std::size_t>(j) * nx + i;
          const double diag = sx[i].diag + sy[j].diag - p.r;
          const double gs = -(sx[i].plus * v[k + 1] + sx[i].minus * v[k - 1] +
                              sy[j].plus * v[k + nx] + sy[j].minus * v[k - nx]) /
                            diag;
          const double relaxed = v[k] + cfg.omega * (gs - v[k]);
          v[k] = std::max(obstacle[k], relaxed);
        }
      }
    }
    scaled_residual(residual);
    if (residual < cfg.psor_tol) break;
  }
  out.sweeps = sweep;
  out.max_residual = residual;
  if (!(residual < cfg.psor_tol)) {
    throw PsorConvergenceError(
        "solve_vi: projected SOR did not reach tolerance in " + std::to_string(sweep) +
            " sweeps (residual " + std::to_string(residual) + ")",
        residual);
  }
  return out;
}

Boundary extract_boundary(const PdeSolution& sol, const ModelParams& p, double contact_tol) {
  if (contact_tol <= 0.0) contact_tol = 1e-6 * p.cost;
  const double x_star = product1_solution(p).threshold;
  if (sol.xs.back() <= x_star) {
    throw std::invalid_argument("extract_boundary: domain does not contain x*");
  }
  std::vector<double> xs;
  std::vector<double> bs;
  for (int i = 0; i < sol.nx; ++i) {
    const double x = sol.xs[i];
    if (x >= x_star) break;
    int contact = -1;
    for (int j = 0; j < sol.ny; ++j) {
      if (sol.at(i, j) - payoff(p, x, sol.ys[j]) < contact_tol) {
        contact = j;
        break;
      }
    }
    if (contact < 0) {
      throw std::runtime_error("extract_boundary: no contact in column (y_max too small)");
    }
    double b = 0.0;
    if (contact > 0) {
      const double g_hi = sol.at(i, contact - 1) - payoff(p, x, sol.ys[contact - 1]);
      const double g_lo = sol.at(i, contact) - payoff(p, x, sol.ys[contact]);
      const double hy = sol.ys[contact] - sol.ys[contact - 1];
      b = sol.ys[contact - 1] + hy * (g_hi - contact_tol) / (g_hi - g_lo);
      b = std::clamp(b, sol.ys[contact - 1], sol.ys[contact]);
    }
    xs.push_back(x);
    bs.push_back(std::max(b, 0.0));
  }
  if (xs.size() < 2) {
    throw std::runtime_error("extract_boundary: grid too coarse left of x*");
  }
  xs.push_back(x_star);
  bs.push_back(0.0);
  project_nonincreasing(bs);
  return Boundary(std::move(xs), std::move(bs));
}

SliceSolution solve_vi_slice(double quantity, double delta, double cost, double alpha,
                             double sigma, double r, double x_max, int n) {
  if (n < 50) throw std::invalid_argument("solve_vi_slice: need n >= 50");
  const OneDimSolution sol = solve_one_dim(quantity, delta, cost, alpha, sigma, r);
  if (!(x_max > 1.5 * sol.threshold)) {
    throw std::invalid_argument("solve_vi_slice: x_max must exceed 1.5x the threshold");
  }
  const double h = x_max / (n - 1);
  SliceSolution out;
  out.xs.resize(n);
  for (int i = 0; i < n; ++i) out.xs[i] = i * h;

  std::vector<double> psi(n);
  for (int i = 0; i < n; ++i) psi[i] = quantity * out.xs[i] / delta - cost;

  // Interior rows of -(L - r) u = 0 as an M-matrix tridiagonal system.
  const int m = n - 2;
  std::vector<double> lower(m), diag(m), upper(m), rhs(m, 0.0);
  for (int k = 0; k < m; ++k) {
    const Stencil st = direction_stencil(out.xs[k + 1], h, sigma, alpha);
    lower[k] = -st.minus;
    upper[k] = -st.plus;
    diag[k] = -(st.diag - r);
  }
  const double u_left = 0.0;
  const double u_right = psi[n - 1];
  rhs.front() -= lower.front() * u_left;
  rhs.back() -= upper.back() * u_right;

  // Projected tridiagonal elimination: forward sweep, then backward
  // substitution with the obstacle applied at each step. Valid here because
  // the contact set is an interval attached to the right boundary, where the
  // substitution starts; complementarity is re-verified below.
  std::vector<double> dp(m), rp(m);
  dp[0] = diag[0];
  rp[0] = rhs[0];
  for (int k = 1; k < m; ++k) {
    const double w = lower[k] / dp[k - 1];
    dp[k] = diag[k] - w * upper[k - 1];
    rp[k] = rhs[k] - w * rp[k - 1];
  }
  std::vector<double> u(n);
  u[0] = u_left;
  u[n - 1] = u_right;
  u[n - 2] = std::max(psi[n - 2], (rp[m - 1] - upper[m - 1] * u_right) / dp[m - 1]);
  for (int k = m - 2; k >= 0; --k) {
    u[k + 1] = std::max(psi[k + 1], (rp[k] - upper[k] * u[k + 2]) / dp[k]);
  }

  double comp_max = 0.0;
  for (int k = 0; k < m; ++k) {
    const double row =
        (lower[k] * u[k] + diag[k] * u[k + 1] + upper[k] * u[k + 2] - rhs[k]) / diag[k];
    const double gap = u[k + 1] - psi[k + 1];
    // row >= 0 (since rows are -(L - r)u), gap >= 0, and min of the two ~ 0.
    comp_max = std::max(comp_max, std::max(-row, std::min(gap, row)));
    comp_max = std::max(comp_max, -gap);
  }
  out.max_residual = comp_max;
  if (!(comp_max <= 1e-9 * cost)) {
    throw std::runtime_error("solve_vi_slice: complementarity verification failed");
  }

  out.values = std::move(u);
  out.boundary_x = out.xs.back();
  const double contact_tol = 1e-9 * cost;
  for (int i = 0; i < n; ++i) {
    if (out.values[i] - psi[i] < contact_tol) {
      if (i == 0) {
        out.boundary_x = 0.0;
      } else {
        const double g_hi = out.values[i - 1] - psi[i - 1];
        const double g_lo = out.values[i] - psi[i];
        out.boundary_x = out.xs[i - 1] + h * (g_hi - contact_tol) / (g_hi - g_lo);
      }
      break;
    }
  }
  return out;
}

}  // namespace stopbound
