#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

namespace stopbound {

namespace detail {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// splitmix64 finalizer (Sebastiano Vigna's mixer).
inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace detail

/// Derives an independent seed from a master seed and a tag. Used to give
/// every iteration / subcommand / sample stream its own reproducible source
/// of randomness without any shared mutable state.
inline constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  return detail::mix64(seed + detail::kGolden * (tag + 1));
}

/// Counter-based random source. The state of sample `counter` under `seed`
/// depends on (seed, counter) alone, so a batch can be generated in any
/// order — or concurrently — and still produce the same multiset of draws.
class SampleRng {
 public:
  SampleRng(std::uint64_t seed, std::uint64_t counter) {
    std::uint64_t h = detail::mix64(seed + detail::kGolden);
    h = detail::mix64(h ^ (counter + 0x632BE59BD9B4E019ULL));
    state_ = h;
  }

  std::uint64_t next_u64() {
    state_ += detail::kGolden;
    return detail::mix64(state_);
  }

  /// Uniform draw in the open interval (0, 1); never returns 0 or 1, so it
  /// is safe under log().
  double uniform01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Two independent standard normals via Box-Muller (consumes two uniforms).
  std::pair<double, double> normal_pair() {
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.14159265358979323846 * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
  }

 private:
  std::uint64_t state_;
};

}  // namespace stopbound
