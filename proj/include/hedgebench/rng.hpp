// Counter-based random numbers keyed by (seed, trial, round, expert).
//
// There is no generator state shared between rounds or trials: every draw is
// a pure function of its key, so loss sequences do not depend on how trials
// are scheduled across threads. Each key opens a short SplitMix64 stream for
// samplers that need more than one uniform (rejection-based Beta).
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

namespace hedgebench {

/// Identifies one independent trial of an experiment.
struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;
};

namespace rng {

inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

inline constexpr std::uint64_t hash_key(std::uint64_t seed, std::uint64_t trial,
                                        std::uint64_t round, std::uint64_t expert) noexcept {
  std::uint64_t h = mix64(seed + kGolden);
  h = mix64(h ^ (trial + 0x632be59bd9b4e019ULL));
  h = mix64(h ^ (round + 0x85157af5e3c4a2d1ULL));
  h = mix64(h ^ (expert + 0xd6e8feb86659fd93ULL));
  return h;
}

/// 53-bit uniform in [0,1).
inline constexpr double to_unit(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Draw stream for a single (seed, trial, round, expert) cell.
class CellStream {
 public:
  constexpr CellStream(const RngStream& s, std::uint64_t round, std::uint64_t expert) noexcept
      : state_(hash_key(s.seed, s.trial, round, expert)) {}

  constexpr std::uint64_t next_u64() noexcept {
    state_ += kGolden;
    return mix64(state_);
  }

  constexpr double uniform() noexcept { return to_unit(next_u64()); }

  /// Uniform in (0,1), safe for log().
  constexpr double uniform_open() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal() noexcept {
    // Marsaglia polar method; deterministic given the stream.
    for (;;) {
      const double u = 2.0 * uniform() - 1.0;
      const double v = 2.0 * uniform() - 1.0;
      const double s = u * u + v * v;
      if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
    }
  }

 private:
  std::uint64_t state_;
};

/// log of a Gamma(shape, 1) variate, Marsaglia-Tsang with the shape<1 boost
/// applied in log space so tiny shapes do not underflow.
inline double log_gamma_variate(CellStream& cs, double shape) {
  double log_boost = 0.0;
  if (shape < 1.0) {
    log_boost = std::log(cs.uniform_open()) / shape;
    shape += 1.0;
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = cs.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = cs.uniform_open();
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) {
      return std::log(d * v) + log_boost;
    }
  }
}

/// Exact Beta(a, b) draw. For a, b <= 1 uses Johnk's rejection sampler in log
/// space; otherwise the ratio of two Gamma variates.
inline double beta_variate(CellStream& cs, double a, double b) {
  if (a <= 1.0 && b <= 1.0) {
    for (;;) {
      const double lx = std::log(cs.uniform_open()) / a;
      const double ly = std::log(cs.uniform_open()) / b;
      const double hi = std::max(lx, ly);
      const double lsum = hi + std::log1p(std::exp(std::min(lx, ly) - hi));
      if (lsum <= 0.0) return std::exp(lx - lsum);
    }
  }
  const double lx = log_gamma_variate(cs, a);
  const double ly = log_gamma_variate(cs, b);
  // x / (x + y) = 1 / (1 + exp(ly - lx))
  return 1.0 / (1.0 + std::exp(ly - lx));
}

}  // namespace rng
}  // namespace hedgebench
