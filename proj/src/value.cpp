#include "stopbound/value.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stopbound/parallel.hpp"
#include "stopbound/rng.hpp"

namespace stopbound {

ValueEstimate estimate_value(const ModelParams& p, double x, double y, const Boundary& b,
                             const SamplerConfig& cfg) {
  if (!(x >= 0.0) || !(y >= 0.0)) {
    throw std::invalid_argument("estimate_value: point must be in the closed quadrant");
  }
  const std::vector<StateSample> batch = draw_batch(p, cfg, 1.0);
  const std::size_t n = batch.size();
  const double ri = p.r * p.cost;

  // Fixed-size chunk partials summed in chunk order keep the result
  // bit-identical for any thread count.
  constexpr std::size_t kChunk = 16384;
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<double> part_sum(chunks, 0.0);
  std::vector<double> part_sq(chunks, 0.0);
  parallel_for(chunks, [&](std::size_t cb, std::size_t ce) {
    for (std::size_t c = cb; c < ce; ++c) {
      double s = 0.0;
      double s2 = 0.0;
      const std::size_t lo = c * kChunk;
      const std::size_t hi = std::min(n, lo + kChunk);
      for (std::size_t i = lo; i < hi; ++i) {
        const double sx = x * batch[i].x_at_zeta;
        const double sy = y * batch[i].y_unit_at_zeta;
        if (sy >= b(sx)) {
          const double flow = p.q1 * sx + p.q2 * sy - ri;
          s += flow;
          s2 += flow * flow;
        }
      }
      part_sum[c] = s;
      part_sq[c] = s2;
    }
  });
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t c = 0; c < chunks; ++c) {
    sum += part_sum[c];
    sum_sq += part_sq[c];
  }
  const double dn = static_cast<double>(n);
  const double mean = sum / dn;
  const double var = std::max(0.0, (sum_sq - dn * mean * mean) / std::max(1.0, dn - 1.0));
  ValueEstimate est;
  est.mean = mean / p.r;
  est.std_error = std::sqrt(var / dn) / p.r;
  est.n = static_cast<long>(n);
  return est;
}

std::vector<HorizonCheck> martingale_check_mixed(const ModelParams& p, double x, double y,
                                                 const Boundary& value_b,
                                                 const Boundary& payoff_b,
                                                 std::span<const double> horizons,
                                                 const MartingaleConfig& cfg) {
  if (cfg.n_outer < 2 || cfg.n_inner < 2) {
    throw std::invalid_argument("martingale_check: need n_outer, n_inner >= 2");
  }
  for (double t : horizons) {
    if (!(t >= 0.0)) throw std::invalid_argument("martingale_check: horizons must be >= 0");
  }
  SamplerConfig ref_cfg;
  ref_cfg.n_samples = static_cast<long>(cfg.n_outer) * cfg.n_inner;
  ref_cfg.seed = derive_seed(cfg.seed, 0x100);
  const ValueEstimate reference = estimate_value(p, x, y, value_b, ref_cfg);

  std::vector<HorizonCheck> checks;
  checks.reserve(horizons.size());
  for (std::size_t h = 0; h < horizons.size(); ++h) {
    const double t = horizons[h];
    HorizonCheck chk;
    chk.horizon = t;
    chk.reference_mean = reference.mean;
    chk.reference_se = reference.std_error;
    if (t == 0.0) {
      chk.martingale_mean = reference.mean;
      chk.martingale_se = reference.std_error;
      chk.z = 0.0;
      checks.push_back(chk);
      continue;
    }
    const std::uint64_t path_seed = derive_seed(cfg.seed, 0x200 + h);
    const std::uint64_t inner_seed = derive_seed(cfg.seed, 0x300 + h);
    const double discount = std::exp(-p.r * t);
    const double ri = p.r * p.cost;
    const std::size_t n_outer = static_cast<std::size_t>(cfg.n_outer);
    std::vector<double> m_values(n_outer);
    parallel_for(n_outer, [&](std::size_t kb, std::size_t ke) {
      for (std::size_t k = kb; k < ke; ++k) {
        SampleRng rng(path_seed, k);
        const double zeta = -std::log(rng.uniform01()) / p.r;
        auto [za, zb] = rng.normal_pair();
        double integral = 0.0;
        double xt = 0.0;
        double yt = 0.0;
        if (zeta < t) {
          // Exact transition to zeta; the truncated discounted flow integral
          // is (1/r) H(Z_zeta) 1{zeta <= t} in expectation.
          const double xz = gbm_step(x, p.alpha1, p.sigma1, zeta, za);
          const double yz = gbm_step(y, p.alpha2, p.sigma2, zeta, zb);
          if (yz >= payoff_b(xz)) {
            integral = (p.q1 * xz + p.q2 * yz - ri) / p.r;
          }
          auto [zc, zd] = rng.normal_pair();
          xt = gbm_step(xz, p.alpha1, p.sigma1, t - zeta, zc);
          yt = gbm_step(yz, p.alpha2, p.sigma2, t - zeta, zd);
        } else {
          xt = gbm_step(x, p.alpha1, p.sigma1, t, za);
          yt = gbm_step(y, p.alpha2, p.sigma2, t, zb);
        }
        SamplerConfig in_cfg;
        in_cfg.n_samples = cfg.n_inner;
        in_cfg.seed = derive_seed(inner_seed, k);
        const ValueEstimate inner = estimate_value(p, xt, yt, value_b, in_cfg);
        m_values[k] = discount * inner.mean + integral;
      }
    });
    double sum = 0.0;
    for (double m : m_values) sum += m;
    const double mean = sum / static_cast<double>(n_outer);
    double ss = 0.0;
    for (double m : m_values) ss += (m - mean) * (m - mean);
    const double se = std::sqrt(ss / (static_cast<double>(n_outer) - 1.0) /
                                static_cast<double>(n_outer));
    chk.martingale_mean = mean;
    chk.martingale_se = se;
    const double denom = std::sqrt(se * se + reference.std_error * reference.std_error);
    chk.z = denom > 0.0 ? (mean - reference.mean) / denom : 0.0;
    checks.push_back(chk);
  }
  return checks;
}

std::vector<HorizonCheck> martingale_check(const ModelParams& p, double x, double y,
                                           const Boundary& b, std::span<const double> horizons,
                                           const MartingaleConfig& cfg) {
  return martingale_check_mixed(p, x, y, b, b, horizons, cfg);
}

}  // namespace stopbound
