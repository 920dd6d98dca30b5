#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "risim/geometry.hpp"
#include "risim/kpi.hpp"
#include "risim/propagation.hpp"
#include "risim/surface.hpp"

namespace risim {

enum class OptimizerKind { Iterative, Grouped, Location, Grid, Brute };

enum class GroupScheme { Consecutive, Tile2x2 };

/// Method selection plus every tuning knob the methods accept.
struct OptimizerParams {
  OptimizerKind kind = OptimizerKind::Iterative;
  int group_size = 4;
  GroupScheme scheme = GroupScheme::Consecutive;
  int max_passes = 3;
  /// Additive Gaussian power-reading noise fed to the measurement oracle,
  /// expressed as a sigma in dBm; disabled when absent.
  std::optional<double> measurement_noise_dbm;
  double grid_extent_m = 1.0;  // half-width of the search box per axis
  double grid_step_m = 0.25;
  Vec3 tx_estimate_error;  // added to the true position for location/grid
  Vec3 rx_estimate_error;

  bool operator==(const OptimizerParams&) const = default;
};

/// Full description of one simulated measurement campaign.
struct ScenarioConfig {
  std::string name;
  int trials = 1;
  std::uint64_t master_seed = 1;

  BlockLayout layout;
  Vec3 ris_center;
  Vec3 ris_normal{0.0, 1.0, 0.0};
  std::vector<Vec3> tx_positions;
  std::vector<Vec3> rx_positions;

  double freq_hz = 3.5e9;
  double tx_power_dbm = 10.0;
  PathLossModel model;
  bool direct_path_present = false;

  RadioConfig radio;
  OptimizerParams optimizer;

  /// Absent when no direct path is modeled; otherwise obstructed whenever
  /// the model carries a positive blockage loss.
  DirectPathMode direct_mode() const {
    if (!direct_path_present) return DirectPathMode::Absent;
    return model.blockage_extra_loss_db > 0.0 ? DirectPathMode::Obstructed
                                              : DirectPathMode::Clear;
  }

  /// Throws std::invalid_argument on structural problems: empty name or
  /// position lists, trials < 1, bad layout/model/radio, non-finite or
  /// degenerate geometry.
  void validate() const;

  /// Non-fatal advisories (currently: carrier outside 3.3-3.8 GHz).
  std::vector<std::string> warnings() const;

  bool operator==(const ScenarioConfig&) const = default;
};

/// Parses the INI-style scenario grammar (see README). Strict: unknown
/// sections, keys, or enum values throw std::invalid_argument.
ScenarioConfig parse_scenario(const std::string& text);

/// Reads and parses a scenario file; file errors raise IoError.
ScenarioConfig parse_scenario_file(const std::string& path);

/// Emits a config that parse_scenario maps back to an equal value.
std::string serialize_scenario(const ScenarioConfig& config);

}  // namespace risim
