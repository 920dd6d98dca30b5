#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "risim/geometry.hpp"
#include "risim/propagation.hpp"
#include "risim/rng.hpp"
#include "risim/surface.hpp"

namespace risim {

/// Power measurement interface shared by simulation and (hypothetically)
/// hardware. Each measure() call counts as one measurement.
class PowerOracle {
 public:
  virtual ~PowerOracle() = default;

  double measure(std::span<const std::uint8_t> config) {
    ++eval_count_;
    return do_measure(config);
  }

  std::uint64_t eval_count() const { return eval_count_; }

 private:
  virtual double do_measure(std::span<const std::uint8_t> config) = 0;

  std::uint64_t eval_count_ = 0;
};

/// Oracle backed by a frozen channel realization. Optional additive Gaussian
/// measurement noise (in watts, clamped at 0) emulates an SDR power reading;
/// true_power() bypasses both the noise and the measurement counter.
/// Per-path phasors are cached on construction, so one measurement costs one
/// complex accumulation per element.
class ChannelPowerOracle final : public PowerOracle {
 public:
  ChannelPowerOracle(ChannelRealization realization, double tx_power_w,
                     double noise_sigma_w = 0.0, std::uint64_t noise_seed = 0);

  /// Noise-free received power; identical to received_signal_power_w on the
  /// stored realization. Does not count as a measurement.
  double true_power(std::span<const std::uint8_t> config) const;

  const ChannelRealization& realization() const { return realization_; }

 private:
  double do_measure(std::span<const std::uint8_t> config) override;

  ChannelRealization realization_;
  std::vector<std::complex<double>> cascade_;  // state-0 phasor per element
  std::complex<double> direct_;
  double tx_power_w_;
  double noise_sigma_w_;
  Rng rng_;
};

/// Oracle delegating to an arbitrary callable; handy in tests.
class CallbackPowerOracle final : public PowerOracle {
 public:
  using Fn = std::function<double(std::span<const std::uint8_t>)>;
  explicit CallbackPowerOracle(Fn fn) : fn_(std::move(fn)) {}

 private:
  double do_measure(std::span<const std::uint8_t> config) override {
    return fn_(config);
  }

  Fn fn_;
};

/// One decision made by a sweeping optimizer.
struct TraceStep {
  int step = 0;                    // global decision counter, from 0
  int element_or_group_index = 0;  // element (ungrouped) or group index
  int pass = 0;                    // pass counter, from 0
  bool accepted = false;           // true when the config changed
  double best_power_w = 0.0;       // best measured power up to this step
};

/// Audit trail of one optimization run.
struct OptimizationTrace {
  std::vector<TraceStep> steps;
  std::vector<double> best_power_sequence;  // running best, one per accepted step
  std::vector<std::uint8_t> final_config;
  double final_power_w = 0.0;  // measured power of the final configuration
  std::uint64_t evaluations = 0;
  int passes = 0;
};

/// Element-by-element sweep: each step measures both states of one element
/// and keeps the better, ties keeping the current state. Sweeps repeat until
/// a pass changes nothing or max_passes is reached.
OptimizationTrace iterative(PowerOracle& oracle, int n,
                            const std::vector<std::uint8_t>& initial,
                            int max_passes = 3);

/// Group sweep: each step measures the two uniform assignments of one group
/// (all 0 / all 1) and keeps the better. A group left mixed by the initial
/// config is forced to the better uniform assignment; ties keep a uniform
/// incumbent and otherwise settle on state 0.
OptimizationTrace grouped_iterative(PowerOracle& oracle,
                                    const std::vector<std::vector<int>>& groups,
                                    const std::vector<std::uint8_t>& initial,
                                    int max_passes = 3);

OptimizationTrace grouped_iterative(PowerOracle& oracle, int n, int group_size,
                                    const std::vector<std::uint8_t>& initial,
                                    int max_passes = 3);

/// Contiguous index ranges of group_size (last may be smaller).
std::vector<std::vector<int>> consecutive_groups(int n, int group_size);

/// Spatial 2x2 tiles under the surface's block-major element ordering.
std::vector<std::vector<int>> tile2x2_groups(const BlockLayout& layout);

/// State whose phase is angularly closest to `desired_phase` among {0, π};
/// exact ties resolve to state 0.
std::uint8_t nearest_binary_state(double desired_phase);

/// Configures each element to cancel its cascade propagation phase
/// (2π/λ)·(d_tx→elem + d_elem→rx), quantized to the nearest available state.
/// Uses only the estimated terminal positions in `estimate`; throws when a
/// terminal coincides with an element.
std::vector<std::uint8_t> location_based(const LinkGeometry& estimate,
                                         const RisSurface& surface,
                                         double wavelength_m);

struct GridSearchResult {
  std::vector<std::uint8_t> config;
  Vec3 best_tx;
  Vec3 best_rx;
  double best_power_w = 0.0;
  std::uint64_t evaluations = 0;
};

/// Tries the location-based config for every candidate (tx, rx) pair on a
/// Cartesian grid over the two boxes and keeps the best measured one. Ties
/// keep the first candidate in enumeration order (x, then y, then z axes;
/// tx outer, rx inner). Throws when a region is ill-formed or step ≤ 0.
GridSearchResult grid_search(const Box3& tx_region, const Box3& rx_region,
                             double step_m, const RisSurface& surface,
                             PowerOracle& oracle, double wavelength_m);

struct BruteForceResult {
  std::vector<std::uint8_t> config;
  double power_w = 0.0;
};

/// Exhaustive search over all 2^n configs, n capped at 24. Ties keep the
/// lexicographically first config (element 0 most significant).
BruteForceResult brute_force(PowerOracle& oracle, int n);

/// CSV dump of a trace: step,element_or_group_index,pass,accepted,best_power_dbm.
std::string trace_to_csv(const OptimizationTrace& trace);

}  // namespace risim
