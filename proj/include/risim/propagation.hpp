#pragma once

#include <cstdint>
#include <vector>

#include "risim/geometry.hpp"

namespace risim {

struct RisSurface;  // see risim/surface.hpp

/// One narrowband channel coefficient: amplitude ≥ 0, phase in [0, 2π).
/// Phases are stored as positive propagation delays; the combining equation
/// applies the conjugation, so no coefficient carries a negated angle.
struct ComplexCoeff {
  double amplitude = 0.0;
  double phase = 0.0;
};

/// Placement of the three terminals of one reflected link.
struct LinkGeometry {
  Vec3 tx_pos;
  Vec3 ris_center;
  Vec3 rx_pos;
  Vec3 ris_normal{0.0, 1.0, 0.0};
  double carrier_freq_hz = 3.5e9;

  /// Throws std::invalid_argument on coincident terminals, non-positive
  /// frequency, or a normal that is not unit length (tolerance 1e-6).
  void validate() const;

  /// True when the carrier lies in the 3.3-3.8 GHz band this tool targets.
  /// Out-of-band carriers are legal; callers may warn.
  bool in_band() const {
    return carrier_freq_hz >= 3.3e9 && carrier_freq_hz <= 3.8e9;
  }

  double wavelength_m() const;
};

enum class PathLossKind { Fspl, LogDistance };

enum class FadingKind { None, Rayleigh, Rician };

/// Distance-to-loss mapping plus the stochastic small-scale layer.
struct PathLossModel {
  PathLossKind kind = PathLossKind::Fspl;
  double exponent = 2.0;              // LogDistance only
  double reference_distance_m = 1.0;  // LogDistance only
  FadingKind fading = FadingKind::None;
  double rician_k_db = 6.0;           // Rician only
  double blockage_extra_loss_db = 25.0;
  double tx_gain_dbi = 13.0;
  double rx_gain_dbi = 13.0;

  /// Throws std::invalid_argument when exponent is outside [1, 6],
  /// reference_distance is non-positive, or the Rician K is not finite.
  void validate() const;

  bool operator==(const PathLossModel&) const = default;

  /// Loss along one segment of the given length, antenna gains excluded.
  double path_loss_db(double distance_m, double freq_hz) const;
};

/// Sampled channel for one (geometry, surface, model, seed) tuple.
struct ChannelRealization {
  std::vector<ComplexCoeff> h;  // Tx → element i
  std::vector<ComplexCoeff> g;  // element i → Rx
  ComplexCoeff direct;          // Tx → Rx; amplitude 0 when no direct path
  double noise_power_w = 0.0;
};

/// Free-space path loss. Throws std::domain_error on non-positive inputs.
double fspl_db(double distance_m, double freq_hz);

/// Free-space loss at the reference distance plus 10·n·log10(d/d0).
/// Throws std::domain_error when distance < model.reference_distance_m.
double log_distance_pl_db(double distance_m, const PathLossModel& model,
                          double freq_hz);

/// Thermal noise floor for the given bandwidth and receiver noise figure.
/// Throws std::domain_error on non-positive bandwidth.
double noise_power_w(double bandwidth_hz, double noise_figure_db);

/// Propagation phase (2π·d/λ) mod 2π for one segment.
double phase_for_distance(double distance_m, double wavelength_m);

/// Whether the Tx→Rx path exists and whether it is obstructed. Obstructed
/// paths pay model.blockage_extra_loss_db on top of distance loss.
enum class DirectPathMode { Absent, Clear, Obstructed };

inline double default_noise_power_w() { return noise_power_w(100e6, 7.0); }

/// Draws per-element and direct-path coefficients for one link. Amplitudes
/// follow the configured distance law with the Tx gain on Tx-side segments
/// and the Rx gain on Rx-side segments (the direct path carries both);
/// deterministic phases are propagation delays; fading, when enabled,
/// multiplies each coefficient by an independent unit-power random factor.
/// Identical inputs give identical realizations on every run and thread.
ChannelRealization sample_channel(const LinkGeometry& geometry,
                                  const RisSurface& surface,
                                  const PathLossModel& model,
                                  std::uint64_t seed,
                                  DirectPathMode direct_mode = DirectPathMode::Absent,
                                  double noise_w = default_noise_power_w());

}  // namespace risim
