#pragma once

#include <complex>
#include <cstdint>
#include <random>

#include "risim/units.hpp"

namespace risim {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Deterministic stream RNG. Every consumer derives an independent stream
/// from (master_seed, stream_id), so results never depend on evaluation
/// order or thread schedule. The engine is std::mt19937_64, whose raw output
/// is fully specified by the standard; floating-point draws below avoid
/// std::distributions, whose sequences are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    return splitmix64(splitmix64(a) ^ b);
  }

  static Rng stream(std::uint64_t master_seed, std::uint64_t stream_id) {
    return Rng(mix(master_seed, stream_id));
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller (one value per call, no caching).
  double gaussian() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log1p(-u1)) * std::cos(kTwoPi * u2);
  }

  /// Complex scatter factor with E[|z|^2] = 1: Rayleigh envelope, uniform phase.
  std::complex<double> scattered_unit_power() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::polar(std::sqrt(-std::log1p(-u1)), kTwoPi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace risim
