#pragma once

#include <string>
#include <vector>

#include "risim/kpi.hpp"
#include "risim/optimizer.hpp"
#include "risim/scenario.hpp"

namespace risim {

/// Result of one configuration method on one link cell.
struct OptimizerOutcome {
  std::string method;  // "iterative", "grouped", "location", "grid", "brute"
  double power_w = 0.0;  // noise-free received power of the final config
  std::vector<std::uint8_t> config;
  std::uint64_t evaluations = 0;
  int passes = 0;
  OptimizationTrace trace;  // steps empty for non-sweeping methods
};

/// One (trial, tx, rx) cell: baseline, bound, and per-method results.
struct CellResult {
  int trial = 0;
  int tx_index = 0;
  int rx_index = 0;
  double off_power_w = 0.0;  // all elements in state 0
  double continuous_bound_w = 0.0;
  std::vector<OptimizerOutcome> outcomes;
};

/// Full campaign output. KPI lists and the gain report are filled by the
/// service-restoration pipeline only.
struct RunResult {
  ScenarioConfig scenario;
  std::vector<CellResult> cells;  // trial-major, then tx, then rx
  std::vector<KpiRecord> kpi_off;
  std::vector<KpiRecord> kpi_on;
  GainReport gains;
  bool has_kpis = false;
};

/// Short-range sweep: element-by-element and location-based methods per
/// cell. `threads` ≤ 0 picks the hardware concurrency; results are
/// identical for every thread count.
RunResult run_phase1(const ScenarioConfig& config, int threads = 1);

/// Long-range sweep: adds the grouped method (size per config) so the
/// measurement-noise crossover can be reproduced.
RunResult run_phase2(const ScenarioConfig& config, int threads = 1);

/// Service-restoration study: element-by-element method per cell, then KPI
/// derivation in the off and on states plus the off-vs-on gain report.
/// Requires a present direct path.
RunResult run_phase3(const ScenarioConfig& config, int threads = 1);

/// Runs only the method selected in config.optimizer; backs the CLI
/// `optimize` subcommand.
RunResult run_single(const ScenarioConfig& config, int threads = 1);

/// results.csv content: one row per method per cell plus baseline and bound
/// rows. Powers at 0.01 dB resolution.
std::string results_to_csv(const RunResult& result);

/// KPI sweep serialization in the shared measurement-log schema.
std::string kpis_to_csv(const std::vector<KpiRecord>& records);

/// gains.csv content: per-point service transition and deltas.
std::string gains_to_csv(const RunResult& result);

/// One-line textual summary of a gain report.
std::string gain_summary_line(const GainReport& gains);

/// Writes results.csv (and kpi_off.csv / kpi_on.csv / gains.csv when
/// present) under out_dir, creating the directory if needed. Returns the
/// list of files written, relative to out_dir.
std::vector<std::string> write_run_outputs(const RunResult& result,
                                           const std::string& out_dir);

}  // namespace risim
