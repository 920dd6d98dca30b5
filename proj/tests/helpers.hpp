#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "risim/propagation.hpp"
#include "risim/rng.hpp"
#include "risim/units.hpp"

namespace risim::test {

/// Random cascaded-channel instance with no direct path: amplitudes in
/// (0.1, 1.1), phases uniform. Independent of sample_channel so channel and
/// surface code are exercised against hand-built inputs too.
inline ChannelRealization random_instance(int n, std::uint64_t seed,
                                          double noise_w = 1e-12) {
  Rng rng(seed);
  ChannelRealization r;
  r.noise_power_w = noise_w;
  for (int i = 0; i < n; ++i) {
    r.h.push_back({0.1 + rng.uniform(), rng.uniform(0.0, kTwoPi)});
    r.g.push_back({0.1 + rng.uniform(), rng.uniform(0.0, kTwoPi)});
  }
  return r;
}

/// Reference power evaluation written against the combining equation
/// directly (explicit cos/sin accumulation), kept independent of the
/// library's phasor arithmetic.
inline double reference_power_w(const ChannelRealization& r,
                                const std::vector<std::uint8_t>& config,
                                double tx_power_w) {
  double re = r.direct.amplitude * std::cos(-r.direct.phase);
  double im = r.direct.amplitude * std::sin(-r.direct.phase);
  for (std::size_t i = 0; i < r.h.size(); ++i) {
    const double amp = r.h[i].amplitude * r.g[i].amplitude;
    const double phase =
        (config[i] ? kPi : 0.0) - r.h[i].phase - r.g[i].phase;
    re += amp * std::cos(phase);
    im += amp * std::sin(phase);
  }
  return tx_power_w * (re * re + im * im);
}

/// Best power over continuous per-element phases, found numerically by
/// cyclic alignment sweeps from several starts. Verification oracle for the
/// closed-form continuous bound.
inline double continuous_ascent_power_w(const ChannelRealization& r,
                                        double tx_power_w) {
  const std::size_t n = r.h.size();
  double best = 0.0;
  for (int start = 0; start < 4; ++start) {
    Rng rng(1000 + start);
    std::vector<double> phi(n);
    for (double& p : phi) p = start == 0 ? 0.0 : rng.uniform(0.0, kTwoPi);

    const auto term = [&](std::size_t i) {
      const double amp = r.h[i].amplitude * r.g[i].amplitude;
      const double phase = phi[i] - r.h[i].phase - r.g[i].phase;
      return std::complex<double>(amp * std::cos(phase), amp * std::sin(phase));
    };
    std::complex<double> sum{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) sum += term(i);
    for (int pass = 0; pass < 60; ++pass) {
      for (std::size_t i = 0; i < n; ++i) {
        const std::complex<double> rest = sum - term(i);
        // Align term i with the rest of the sum (or any direction if rest
        // vanishes); this is the exact single-coordinate maximizer.
        phi[i] = std::abs(rest) > 0.0
                     ? std::arg(rest) + r.h[i].phase + r.g[i].phase
                     : 0.0;
        sum = rest + term(i);
      }
    }
    best = std::max(best, std::norm(sum));
  }
  return tx_power_w * best;
}

}  // namespace risim::test
