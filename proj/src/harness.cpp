#include "risim/harness.hpp"

#include <atomic>
#include <exception>
#include <filesystem>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "risim/propagation.hpp"
#include "risim/rng.hpp"
#include "risim/surface.hpp"
#include "risim/textio.hpp"
#include "risim/units.hpp"

namespace risim {

namespace {

const char* method_name(OptimizerKind kind) {
  switch (kind) {
    case OptimizerKind::Iterative: return "iterative";
    case OptimizerKind::Grouped: return "grouped";
    case OptimizerKind::Location: return "location";
    case OptimizerKind::Grid: return "grid";
    case OptimizerKind::Brute: return "brute";
  }
  return "unknown";
}

/// Stable per-method noise-stream ids: adding a method to a pipeline never
/// changes another method's measurement-noise draws.
std::uint64_t method_stream(OptimizerKind kind) {
  switch (kind) {
    case OptimizerKind::Iterative: return 2;
    case OptimizerKind::Grouped: return 3;
    case OptimizerKind::Location: return 4;
    case OptimizerKind::Grid: return 5;
    case OptimizerKind::Brute: return 6;
  }
  return 99;
}

CellResult run_cell(const ScenarioConfig& s, const RisSurface& surface,
                    int trial, int tx_i, int rx_i,
                    const std::vector<OptimizerKind>& methods) {
  const int n = surface.element_count();
  const std::uint64_t n_tx = s.tx_positions.size();
  const std::uint64_t n_rx = s.rx_positions.size();
  const std::uint64_t linear =
      (static_cast<std::uint64_t>(trial) * n_tx + tx_i) * n_rx + rx_i;
  const std::uint64_t cell_seed = Rng::mix(s.master_seed, linear);

  LinkGeometry geometry;
  geometry.tx_pos = s.tx_positions[tx_i];
  geometry.ris_center = s.ris_center;
  geometry.rx_pos = s.rx_positions[rx_i];
  geometry.ris_normal = s.ris_normal;
  geometry.carrier_freq_hz = s.freq_hz;

  const double noise_w =
      noise_power_w(s.radio.bandwidth_hz, s.radio.noise_figure_db);
  const ChannelRealization channel =
      sample_channel(geometry, surface, s.model, Rng::mix(cell_seed, 1),
                     s.direct_mode(), noise_w);
  const double tx_w = dbm_to_w(s.tx_power_dbm);

  CellResult cell;
  cell.trial = trial;
  cell.tx_index = tx_i;
  cell.rx_index = rx_i;

  const std::vector<std::uint8_t> off_config(n, 0);
  const ChannelPowerOracle probe(channel, tx_w);  // noise-free reference
  cell.off_power_w = probe.true_power(off_config);
  cell.continuous_bound_w = optimal_continuous_power_w(channel, tx_w);

  const double sigma_w = s.optimizer.measurement_noise_dbm
                             ? dbm_to_w(*s.optimizer.measurement_noise_dbm)
                             : 0.0;

  for (const OptimizerKind kind : methods) {
    ChannelPowerOracle oracle(channel, tx_w, sigma_w,
                              Rng::mix(cell_seed, method_stream(kind)));
    OptimizerOutcome outcome;
    outcome.method = method_name(kind);
    switch (kind) {
      case OptimizerKind::Iterative:
        outcome.trace = iterative(oracle, n, off_config, s.optimizer.max_passes);
        break;
      case OptimizerKind::Grouped: {
        const std::vector<std::vector<int>> groups =
            s.optimizer.scheme == GroupScheme::Tile2x2
                ? tile2x2_groups(s.layout)
                : consecutive_groups(n, s.optimizer.group_size);
        outcome.trace =
            grouped_iterative(oracle, groups, off_config, s.optimizer.max_passes);
        break;
      }
      case OptimizerKind::Location: {
        LinkGeometry estimate = geometry;
        estimate.tx_pos = estimate.tx_pos + s.optimizer.tx_estimate_error;
        estimate.rx_pos = estimate.rx_pos + s.optimizer.rx_estimate_error;
        outcome.config = location_based(estimate, surface, geometry.wavelength_m());
        break;
      }
      case OptimizerKind::Grid: {
        const Vec3 te = geometry.tx_pos + s.optimizer.tx_estimate_error;
        const Vec3 re = geometry.rx_pos + s.optimizer.rx_estimate_error;
        const double ext = s.optimizer.grid_extent_m;
        // The search box is planar (x/y only): terminal heights are treated
        // as known, which keeps the candidate count quadratic, not cubic.
        const Box3 tx_region{{te.x - ext, te.y - ext, te.z},
                             {te.x + ext, te.y + ext, te.z}};
        const Box3 rx_region{{re.x - ext, re.y - ext, re.z},
                             {re.x + ext, re.y + ext, re.z}};
        GridSearchResult found =
            grid_search(tx_region, rx_region, s.optimizer.grid_step_m, surface,
                        oracle, geometry.wavelength_m());
        outcome.config = std::move(found.config);
        outcome.evaluations = found.evaluations;
        break;
      }
      case OptimizerKind::Brute: {
        BruteForceResult found = brute_force(oracle, n);
        outcome.config = std::move(found.config);
        outcome.evaluations = oracle.eval_count();
        break;
      }
    }
    if (!outcome.trace.final_config.empty()) {
      outcome.config = outcome.trace.final_config;
      outcome.evaluations = outcome.trace.evaluations;
      outcome.passes = outcome.trace.passes;
    }
    outcome.power_w = probe.true_power(outcome.config);
    cell.outcomes.push_back(std::move(outcome));
  }
  return cell;
}

RunResult run_cells(const ScenarioConfig& s,
                    const std::vector<OptimizerKind>& methods, int threads) {
  s.validate();
  const RisSurface surface = tile_blocks(s.layout, s.ris_center, s.ris_normal);
  const std::size_t n_tx = s.tx_positions.size();
  const std::size_t n_rx = s.rx_positions.size();
  const std::size_t total = static_cast<std::size_t>(s.trials) * n_tx * n_rx;

  RunResult result;
  result.scenario = s;
  result.cells.resize(total);

  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  std::size_t n_threads = threads <= 0 ? hw : static_cast<std::size_t>(threads);
  n_threads = std::min(n_threads, total);

  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  const auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= total) return;
      try {
        const int trial = static_cast<int>(i / (n_tx * n_rx));
        const int tx_i = static_cast<int>((i / n_rx) % n_tx);
        const int rx_i = static_cast<int>(i % n_rx);
        result.cells[i] = run_cell(s, surface, trial, tx_i, rx_i, methods);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return result;
}

const OptimizerOutcome& outcome_named(const CellResult& cell,
                                      const std::string& method) {
  for (const OptimizerOutcome& outcome : cell.outcomes) {
    if (outcome.method == method) return outcome;
  }
  throw std::logic_error("missing optimizer outcome '" + method + "'");
}

}  // namespace

RunResult run_phase1(const ScenarioConfig& config, int threads) {
  return run_cells(config, {OptimizerKind::Iterative, OptimizerKind::Location},
                   threads);
}

RunResult run_phase2(const ScenarioConfig& config, int threads) {
  return run_cells(config,
                   {OptimizerKind::Iterative, OptimizerKind::Grouped,
                    OptimizerKind::Location},
                   threads);
}

RunResult run_phase3(const ScenarioConfig& config, int threads) {
  if (config.direct_mode() == DirectPathMode::Absent) {
    throw std::invalid_argument(
        "phase3 requires direct_path = present (the study compares the "
        "surface against a blocked direct link)");
  }
  RunResult result = run_cells(config, {OptimizerKind::Iterative}, threads);

  result.kpi_off.reserve(result.cells.size());
  result.kpi_on.reserve(result.cells.size());
  double t = 0.0;
  for (const CellResult& cell : result.cells) {
    const OptimizerOutcome& on = outcome_named(cell, "iterative");
    KpiRecord off_record =
        derive_kpis(cell.off_power_w, config.radio, AccessMode::InitialAccess);
    KpiRecord on_record =
        derive_kpis(on.power_w, config.radio, AccessMode::InitialAccess);
    off_record.timestamp_s = t;
    on_record.timestamp_s = t;
    t += 1.0;
    off_record.position = config.rx_positions[cell.rx_index];
    on_record.position = off_record.position;
    result.kpi_off.push_back(off_record);
    result.kpi_on.push_back(on_record);
  }
  result.gains = gain_report(result.kpi_off, result.kpi_on);
  result.has_kpis = true;
  return result;
}

RunResult run_single(const ScenarioConfig& config, int threads) {
  return run_cells(config, {config.optimizer.kind}, threads);
}

std::string results_to_csv(const RunResult& result) {
  std::string out =
      "trial,tx_index,rx_index,method,power_dbm,evaluations,passes,config_hex\n";
  const int n = result.scenario.layout.element_count();
  const std::string off_hex = config_to_hex(std::vector<std::uint8_t>(n, 0));
  for (const CellResult& cell : result.cells) {
    const auto row = [&](const char* method, double power_w,
                         std::uint64_t evals, int passes,
                         const std::string& hex) {
      out += format("%d,%d,%d,%s,%.2f,%llu,%d,%s\n", cell.trial, cell.tx_index,
                    cell.rx_index, method, w_to_dbm_floored(power_w),
                    static_cast<unsigned long long>(evals), passes, hex.c_str());
    };
    row("off", cell.off_power_w, 0, 0, off_hex);
    row("bound", cell.continuous_bound_w, 0, 0, "");
    for (const OptimizerOutcome& outcome : cell.outcomes) {
      row(outcome.method.c_str(), outcome.power_w, outcome.evaluations,
          outcome.passes, config_to_hex(outcome.config));
    }
  }
  return out;
}

std::string kpis_to_csv(const std::vector<KpiRecord>& records) {
  std::string out = kpi_csv_header() + "\n";
  for (const KpiRecord& record : records) out += kpi_to_csv_row(record) + "\n";
  return out;
}

std::string gains_to_csv(const RunResult& result) {
  std::string out =
      "point,off_service,on_service,comparable,delta_rsrp_db,delta_sinr_db\n";
  const auto service_text = [](const KpiRecord& r) {
    return r.service == ServiceState::Connected ? "Connected" : "NoAccess";
  };
  for (const PointGain& point : result.gains.points) {
    out += format("%d,%s,%s,%d,%.2f,%.2f\n", point.index,
                  service_text(result.kpi_off[point.index]),
                  service_text(result.kpi_on[point.index]),
                  point.comparable ? 1 : 0, point.delta_rsrp_db,
                  point.delta_sinr_db);
  }
  return out;
}

std::string gain_summary_line(const GainReport& gains) {
  return format(
      "comparable=%d restored=%d lost=%d avg_delta_rsrp_db=%.2f "
      "avg_delta_sinr_db=%.2f",
      gains.comparable_count, gains.restored_count, gains.lost_count,
      gains.avg_delta_rsrp_db, gains.avg_delta_sinr_db);
}

std::vector<std::string> write_run_outputs(const RunResult& result,
                                           const std::string& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw IoError("cannot create output directory '" + out_dir +
                  "': " + ec.message());
  }
  std::vector<std::string> written;
  const auto emit = [&](const std::string& name, const std::string& content) {
    write_text_file(out_dir + "/" + name, content);
    written.push_back(name);
  };
  emit("results.csv", results_to_csv(result));
  if (result.has_kpis) {
    emit("kpi_off.csv", kpis_to_csv(result.kpi_off));
    emit("kpi_on.csv", kpis_to_csv(result.kpi_on));
    emit("gains.csv", gains_to_csv(result));
  }
  return written;
}

}  // namespace risim
