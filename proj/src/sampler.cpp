#include "stopbound/sampler.hpp"

#include <cmath>
#include <stdexcept>

#include "stopbound/parallel.hpp"
#include "stopbound/rng.hpp"

namespace stopbound {

double gbm_step(double start, double alpha, double sigma, double dt, double z) {
  if (dt <= 0.0) return start;
  return start * std::exp((alpha - 0.5 * sigma * sigma) * dt + sigma * std::sqrt(dt) * z);
}

std::vector<StateSample> draw_batch(const ModelParams& p, const SamplerConfig& cfg, double x0) {
  if (cfg.n_samples < 1) throw std::invalid_argument("draw_batch: n_samples must be >= 1");
  if (!(x0 > 0.0)) throw std::invalid_argument("draw_batch: x0 must be positive");
  const std::size_t n = static_cast<std::size_t>(cfg.n_samples);
  std::vector<StateSample> batch(n);
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const std::uint64_t counter = cfg.antithetic ? i / 2 : i;
      const bool mirrored = cfg.antithetic && (i % 2 == 1);
      SampleRng rng(cfg.seed, counter);
      double u = rng.uniform01();
      auto [z1, z2] = rng.normal_pair();
      if (mirrored) {
        u = 1.0 - u;
        z1 = -z1;
        z2 = -z2;
      }
      StateSample& s = batch[i];
      s.zeta = -std::log(u) / p.r;
      s.x_at_zeta = gbm_step(x0, p.alpha1, p.sigma1, s.zeta, z1);
      s.y_unit_at_zeta = gbm_step(1.0, p.alpha2, p.sigma2, s.zeta, z2);
    }
  });
  return batch;
}

double density_rho(double alpha, double sigma, double t, double start, double end) {
  if (!(t > 0.0) || !(start > 0.0) || !(end > 0.0)) {
    throw std::domain_error("density_rho: t, start and end must be positive");
  }
  const double s = sigma * std::sqrt(t);
  const double m = std::log(end) - std::log(start) - (alpha - 0.5 * sigma * sigma) * t;
  return std::exp(-m * m / (2.0 * s * s)) / (end * s * std::sqrt(2.0 * 3.14159265358979323846));
}

}  // namespace stopbound
