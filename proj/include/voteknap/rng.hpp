#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "voteknap/errors.hpp"

namespace voteknap {

// SplitMix64 finalizer, used to derive independent substream seeds.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Independent child seed for grid point / instance / table row `index`.
// Separate salt from RngStream::substream so the two seed spaces never
// collide even for equal (master, index).
constexpr std::uint64_t derive_child_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(master) ^ mix64(index + 0x94D049BB133111EBULL);
}

// Deterministic random stream. All simulation code draws from this wrapper
// rather than from <random> distributions, so that outputs depend only on
// (seed, substream index) and not on standard-library internals.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : gen_(mix64(seed)) {}

  // Substream `index` of master `seed`. Substreams with distinct indices are
  // statistically independent and reproducible.
  static RngStream substream(std::uint64_t seed, std::uint64_t index) {
    return RngStream(mix64(seed) ^ mix64(index + 0x632BE59BD9B4E019ULL));
  }

  std::uint64_t next_u64() { return gen_(); }

  // Uniform double in [0, 1), 53-bit resolution.
  double next_unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Uniform double in (0, 1]; safe as a log() argument.
  double next_unit_pos() {
    return static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;
  }

  // Uniform integer in [0, bound). Rejection sampling, no modulo bias.
  std::uint64_t next_below(std::uint64_t bound) {
    if (bound == 0) throw invalid_input_error("next_below: bound must be positive");
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = gen_();
      if (r >= threshold) return r % bound;
    }
  }

  // Standard normal via Box-Muller.
  double next_normal() {
    const double u1 = next_unit_pos();
    const double u2 = next_unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  // Gamma(shape, 1) via Marsaglia-Tsang; shape < 1 handled by the boost
  // Gamma(a) = Gamma(a+1) * U^(1/a).
  double next_gamma(double shape) {
    if (!(shape > 0.0)) throw invalid_input_error("next_gamma: shape must be positive");
    if (shape < 1.0) {
      const double u = next_unit_pos();
      return next_gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = next_normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = next_unit_pos();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  // Beta(a, b) as a gamma ratio.
  double next_beta(double a, double b) {
    const double x = next_gamma(a);
    const double y = next_gamma(b);
    const double s = x + y;
    return s > 0.0 ? x / s : 0.5;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace voteknap
