#include "stopbound/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "stopbound/closed_form.hpp"
#include "stopbound/parallel.hpp"
#include "stopbound/rng.hpp"

namespace stopbound {

Boundary::Boundary(std::vector<double> xs, std::vector<double> bs)
    : xs_(std::move(xs)), bs_(std::move(bs)) {
  if (xs_.size() < 2 || xs_.size() != bs_.size()) {
    throw std::invalid_argument("Boundary: need matching grids with at least 2 nodes");
  }
  if (xs_.front() != 0.0) throw std::invalid_argument("Boundary: grid must start at 0");
  for (std::size_t i = 0; i + 1 < xs_.size(); ++i) {
    if (!(xs_[i] < xs_[i + 1])) {
      throw std::invalid_argument("Boundary: grid must be strictly increasing");
    }
  }
  for (double b : bs_) {
    if (std::isnan(b) || b < 0.0) {
      throw std::invalid_argument("Boundary: values must be nonnegative and not NaN");
    }
  }
}

double Boundary::operator()(double x) const {
  if (x <= 0.0) return bs_.front();
  if (x >= xs_.back()) return x == xs_.back() ? bs_.back() : 0.0;
  const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - xs_.begin()) - 1;
  const double b0 = bs_[i];
  const double b1 = bs_[i + 1];
  if (b0 == b1) return b0;  // also covers +inf plateaus used by test doubles
  const double w = (x - xs_[i]) / (xs_[i + 1] - xs_[i]);
  return b0 + w * (b1 - b0);
}

double Boundary::first_zero() const {
  for (std::size_t i = 0; i < bs_.size(); ++i) {
    if (bs_[i] <= 0.0) {
      if (i == 0) return 0.0;
      const double b0 = bs_[i - 1];
      if (b0 <= 0.0) return xs_[i - 1];
      return xs_[i - 1] + (xs_[i] - xs_[i - 1]) * b0 / (b0 - bs_[i]);
    }
  }
  return xs_.back();
}

std::vector<double> chebyshev_grid(double x_star, int n) {
  if (n < 2) throw std::invalid_argument("chebyshev_grid: need at least 2 nodes");
  if (!(x_star > 0.0)) throw std::invalid_argument("chebyshev_grid: x_star must be positive");
  std::vector<double> xs(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    xs[static_cast<std::size_t>(j)] =
        x_star * 0.5 * (1.0 - std::cos(3.14159265358979323846 * j / (n - 1)));
  }
  xs.front() = 0.0;
  xs.back() = x_star;
  return xs;
}

namespace {

Boundary initial_from_shape(const ModelParams& p, int grid_size, bool parabola) {
  const double x_star = product1_solution(p).threshold;
  const double y_star = product2_solution(p).threshold;
  std::vector<double> xs = chebyshev_grid(x_star, grid_size);
  std::vector<double> bs(xs.size());
  for (std::size_t j = 0; j < xs.size(); ++j) {
    const double s = 1.0 - xs[j] / x_star;
    bs[j] = y_star * (parabola ? s * s : s);
  }
  bs.back() = 0.0;
  return Boundary(std::move(xs), std::move(bs));
}

}  // namespace

Boundary initial_parabola(const ModelParams& p, int grid_size) {
  return initial_from_shape(p, grid_size, true);
}

Boundary initial_line(const ModelParams& p, int grid_size) {
  return initial_from_shape(p, grid_size, false);
}

void project_nonincreasing(std::span<double> values) {
  const std::size_t n = values.size();
  if (n < 2) return;
  // Pool adjacent violators on the negated sequence (nondecreasing form).
  std::vector<double> mean(n);
  std::vector<std::size_t> count(n);
  std::size_t blocks = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double m = values[i];
    std::size_t c = 1;
    while (blocks > 0 && mean[blocks - 1] < m) {
      m = (m * c + mean[blocks - 1] * count[blocks - 1]) / (c + count[blocks - 1]);
      c += count[blocks - 1];
      --blocks;
    }
    mean[blocks] = m;
    count[blocks] = c;
    ++blocks;
  }
  std::size_t idx = 0;
  for (std::size_t b = 0; b < blocks; ++b) {
    for (std::size_t k = 0; k < count[b]; ++k) values[idx++] = mean[b];
  }
}

ClassMReport check_class_m(const Boundary& b, const ModelParams& p,
                           const ClassMTolerances& tol) {
  const double x_star = product1_solution(p).threshold;
  const double y_star = product2_solution(p).threshold;
  const auto& xs = b.grid();
  const auto& bs = b.values();
  ClassMReport rep;

  const double slack = tol.bound_slack * y_star;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i + 1 < xs.size()) {
      rep.worst_monotone_violation =
          std::max(rep.worst_monotone_violation, bs[i + 1] - bs[i]);
    }
    const double lo = std::max(kill_line(p, xs[i]), 0.0);
    rep.worst_kill_gap = std::max(rep.worst_kill_gap, lo - bs[i]);
    rep.worst_indifference_gap =
        std::max(rep.worst_indifference_gap, indifference_line(p, xs[i]) - bs[i]);
    rep.worst_cap_excess = std::max(rep.worst_cap_excess, bs[i] - y_star);
  }
  rep.nonincreasing = rep.worst_monotone_violation <= tol.mono_slack * y_star;
  rep.above_kill = rep.worst_kill_gap <= slack;
  rep.above_indifference = rep.worst_indifference_gap <= slack;
  rep.capped = rep.worst_cap_excess <= slack;

  // Convexity on a uniform probe grid; the piecewise-linear interpolant of a
  // discretely convex node set can only look more convex at coarser spacing.
  const int m = std::max(tol.convex_probes, 5);
  const double dx = x_star / (m - 1);
  for (int i = 1; i + 1 < m; ++i) {
    const double d2 = b((i + 1) * dx) - 2.0 * b(i * dx) + b((i - 1) * dx);
    rep.worst_concavity = std::min(rep.worst_concavity, d2);
  }
  rep.convex = rep.worst_concavity >= -tol.convex_frac * y_star;

  rep.anchor_error_left = std::abs(bs.front() - y_star);
  rep.anchor_error_right = std::abs(bs.back());
  rep.anchored = rep.anchor_error_left <= tol.anchor_rel * y_star &&
                 rep.anchor_error_right <= tol.anchor_rel * y_star;
  return rep;
}

ValueEstimate psi_over_batch(const ModelParams& p, double x, double y, const Boundary& b,
                             std::span<const StateSample> unit_batch) {
  if (!(x >= 0.0) || !(y >= 0.0)) {
    throw std::invalid_argument("psi: evaluation point must be in the closed quadrant");
  }
  if (unit_batch.empty()) throw std::invalid_argument("psi: empty sample batch");
  const double ri = p.r * p.cost;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (const StateSample& s : unit_batch) {
    const double sx = x * s.x_at_zeta;
    const double sy = y * s.y_unit_at_zeta;
    if (sy >= b(sx)) {
      const double payoff_flow = p.q1 * sx + p.q2 * sy - ri;
      sum += payoff_flow;
      sum_sq += payoff_flow * payoff_flow;
    }
  }
  const double n = static_cast<double>(unit_batch.size());
  const double mean = sum / n;
  const double var = std::max(0.0, (sum_sq - n * mean * mean) / std::max(1.0, n - 1.0));
  const double scale = p.lambda / p.r;
  ValueEstimate est;
  est.mean = indifference_line(p, x) + scale * mean;
  est.std_error = scale * std::sqrt(var / n);
  est.n = static_cast<long>(unit_batch.size());
  return est;
}

ValueEstimate psi(const ModelParams& p, double x, double y, const Boundary& b,
                  const SamplerConfig& cfg) {
  const std::vector<StateSample> batch = draw_batch(p, cfg, 1.0);
  return psi_over_batch(p, x, y, b, batch);
}

namespace {

/// Raw node-wise Psi sweep followed by the feasibility projection.
Boundary project_step(const ModelParams& p, const Boundary& b_prev,
                      const std::vector<ValueEstimate>& raw, double y_star,
                      double relaxation) {
  const auto& xs = b_prev.grid();
  const auto& prev = b_prev.values();
  std::vector<double> next(xs.size());
  for (std::size_t j = 0; j < xs.size(); ++j) {
    double v = relaxation * raw[j].mean + (1.0 - relaxation) * prev[j];
    const double lo = std::max(kill_line(p, xs[j]), 0.0);
    next[j] = std::clamp(v, lo, y_star);
  }
  project_nonincreasing(next);
  // Pooling can drag a node below its own floor; the floor is nonincreasing
  // in x, so re-clamping keeps the sequence monotone.
  for (std::size_t j = 0; j < xs.size(); ++j) {
    next[j] = std::max(next[j], std::max(kill_line(p, xs[j]), 0.0));
  }
  next.front() = y_star;
  next.back() = 0.0;
  return Boundary(xs, std::move(next));
}

std::vector<ValueEstimate> sweep_nodes(const ModelParams& p, const Boundary& b,
                                       std::span<const StateSample> batch) {
  const auto& xs = b.grid();
  const auto& bs = b.values();
  std::vector<ValueEstimate> raw(xs.size());
  parallel_for(xs.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) {
      raw[j] = psi_over_batch(p, xs[j], bs[j], b, batch);
    }
  });
  return raw;
}

}  // namespace

Boundary iterate_once(const ModelParams& p, const Boundary& b_prev, const SamplerConfig& cfg,
                      double relaxation) {
  if (!(relaxation > 0.0) || relaxation > 1.0) {
    throw std::invalid_argument("iterate_once: relaxation must be in (0, 1]");
  }
  const double y_star = product2_solution(p).threshold;
  const std::vector<StateSample> batch = draw_batch(p, cfg, 1.0);
  const std::vector<ValueEstimate> raw = sweep_nodes(p, b_prev, batch);
  return project_step(p, b_prev, raw, y_star, relaxation);
}

std::pair<Boundary, SolveReport> solve_boundary(const ModelParams& p, const SolveOptions& opts,
                                                const SamplerConfig& cfg) {
  if (opts.grid_size < 8) throw std::invalid_argument("solve_boundary: grid_size must be >= 8");
  if (opts.max_iter < 1) throw std::invalid_argument("solve_boundary: max_iter must be >= 1");
  if (!(opts.relaxation > 0.0) || opts.relaxation > 1.0) {
    throw std::invalid_argument("solve_boundary: relaxation must be in (0, 1]");
  }
  const double y_star = product2_solution(p).threshold;
  const double tol = opts.tol > 0.0 ? opts.tol : 0.005 * y_star;

  Boundary b = opts.initial == InitialGuess::kParabola ? initial_parabola(p, opts.grid_size)
                                                       : initial_line(p, opts.grid_size);
  SolveReport report;
  for (int iter = 1; iter <= opts.max_iter; ++iter) {
    SamplerConfig it_cfg = cfg;
    it_cfg.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(iter));
    const std::vector<StateSample> batch = draw_batch(p, it_cfg, 1.0);
    const std::vector<ValueEstimate> raw = sweep_nodes(p, b, batch);
    Boundary next = project_step(p, b, raw, y_star, opts.relaxation);

    double sup_change = 0.0;
    for (std::size_t j = 0; j < next.values().size(); ++j) {
      sup_change = std::max(sup_change, std::abs(next.values()[j] - b.values()[j]));
    }
    report.sup_change_history.push_back(sup_change);
    report.iterations = iter;
    b = std::move(next);
    if (sup_change < tol) {
      report.converged = true;
      break;
    }
  }

  // Residual on an independent batch: how far the returned curve is from a
  // fixed point of the raw (unprojected) operator.
  SamplerConfig res_cfg = cfg;
  res_cfg.seed = derive_seed(cfg.seed, 0x8000000000000001ULL);
  const std::vector<StateSample> batch = draw_batch(p, res_cfg, 1.0);
  const std::vector<ValueEstimate> raw = sweep_nodes(p, b, batch);
  const std::size_t m = b.grid().size();
  report.residual_abs.resize(m);
  report.residual_se.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    report.residual_abs[j] = std::abs(b.values()[j] - raw[j].mean);
    report.residual_se[j] = raw[j].std_error;
    if (j > 0 && j + 1 < m) {
      report.residual_sup_interior = std::max(report.residual_sup_interior, report.residual_abs[j]);
      report.residual_max_se = std::max(report.residual_max_se, report.residual_se[j]);
    }
  }
  return {std::move(b), std::move(report)};
}

}  // namespace stopbound
