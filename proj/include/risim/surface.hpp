#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "risim/geometry.hpp"
#include "risim/propagation.hpp"
#include "risim/units.hpp"

namespace risim {

/// Arrangement of 8x8 element blocks tiled into one surface. Hardware caps
/// the assembly at 16 blocks.
struct BlockLayout {
  static constexpr int kBlockDim = 8;
  static constexpr double kElementPitchM = 0.041;

  int block_rows = 1;
  int block_cols = 1;

  int block_count() const { return block_rows * block_cols; }
  int element_count() const { return block_count() * kBlockDim * kBlockDim; }

  bool operator==(const BlockLayout&) const = default;

  /// Throws std::invalid_argument when either dimension is < 1 or the
  /// block count exceeds 16.
  void validate() const;
};

/// A two-state reflecting surface: element positions in space plus one
/// phase bit per element (0 ↔ 0 rad, 1 ↔ π rad). Treat as immutable after
/// construction except for `config`, which optimizers rewrite in place on
/// their privately owned copy.
struct RisSurface {
  BlockLayout layout;
  Vec3 center;
  Vec3 normal;
  std::vector<Vec3> element_positions;
  std::vector<std::uint8_t> config;  // one entry per element, value 0 or 1

  int element_count() const { return static_cast<int>(element_positions.size()); }
};

/// Builds the element grid for a layout centered on `center` in the plane
/// orthogonal to `normal`. Ordering is block-major (blocks row-major over
/// the layout), then row-major within each 8x8 block; optimizer sweep
/// results depend on this order, so it is part of the contract.
/// All config bits start at 0.
RisSurface tile_blocks(const BlockLayout& layout, const Vec3& center,
                       const Vec3& normal);

/// Phase shift applied by one element in the given state: 0 or π.
inline double element_phase(std::uint8_t state) { return state ? kPi : 0.0; }

/// Received phasor of one cascaded path with the element in state 0:
/// a·b · e^{−j(θ+ψ)}. State 1 contributes exactly the negation, since the
/// only two element phases are 0 and π.
inline std::complex<double> cascade_phasor(const ComplexCoeff& h,
                                           const ComplexCoeff& g) {
  return std::polar(h.amplitude * g.amplitude, -(h.phase + g.phase));
}

/// |direct + Σ_i a_i·b_i·e^{j(φ_i − θ_i − ψ_i)}|² · tx_power, where φ_i is
/// the element phase picked by `config`. Throws std::invalid_argument when
/// config length differs from the realization's coefficient count.
double received_signal_power_w(const ChannelRealization& realization,
                               std::span<const std::uint8_t> config,
                               double tx_power_w);

double received_signal_power_w(const ChannelRealization& realization,
                               const RisSurface& surface, double tx_power_w);

/// 10·log10(received power / realization.noise_power_w).
double received_snr_db(const ChannelRealization& realization,
                       const RisSurface& surface, double tx_power_w);

/// Power with every cascaded term phase-aligned: tx_power · (Σ_i a_i·b_i)².
/// Upper bound for any phase configuration when the direct amplitude is 0.
double optimal_continuous_power_w(const ChannelRealization& realization,
                                  double tx_power_w);

/// Hex serialization of a config bitmap. Element 0 is the least significant
/// bit of the first byte; the final byte is zero-padded in its high bits.
std::string config_to_hex(std::span<const std::uint8_t> config);

/// Inverse of config_to_hex. Throws std::invalid_argument on non-hex input,
/// wrong length for `element_count`, or nonzero padding bits.
std::vector<std::uint8_t> config_from_hex(const std::string& hex,
                                          int element_count);

}  // namespace risim
