#include "risim/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "risim/textio.hpp"
#include "risim/units.hpp"

namespace risim {

ChannelPowerOracle::ChannelPowerOracle(ChannelRealization realization,
                                       double tx_power_w, double noise_sigma_w,
                                       std::uint64_t noise_seed)
    : realization_(std::move(realization)),
      direct_(std::polar(realization_.direct.amplitude,
                         -realization_.direct.phase)),
      tx_power_w_(tx_power_w),
      noise_sigma_w_(noise_sigma_w),
      rng_(noise_seed) {
  if (realization_.g.size() != realization_.h.size()) {
    throw std::invalid_argument(
        "ChannelPowerOracle: mismatched coefficient lists");
  }
  cascade_.reserve(realization_.h.size());
  for (std::size_t i = 0; i < realization_.h.size(); ++i) {
    cascade_.push_back(cascade_phasor(realization_.h[i], realization_.g[i]));
  }
}

double ChannelPowerOracle::true_power(std::span<const std::uint8_t> config) const {
  if (config.size() != cascade_.size()) {
    throw std::invalid_argument(
        "ChannelPowerOracle: config length does not match channel size");
  }
  std::complex<double> sum = direct_;
  for (std::size_t i = 0; i < cascade_.size(); ++i) {
    sum += config[i] ? -cascade_[i] : cascade_[i];
  }
  return tx_power_w_ * std::norm(sum);
}

double ChannelPowerOracle::do_measure(std::span<const std::uint8_t> config) {
  double p = true_power(config);
  if (noise_sigma_w_ > 0.0) {
    p = std::max(0.0, p + noise_sigma_w_ * rng_.gaussian());
  }
  return p;
}

namespace {

void check_bits(const std::vector<std::uint8_t>& config, const char* who) {
  for (const std::uint8_t s : config) {
    if (s > 1) {
      throw std::invalid_argument(std::string(who) + ": config entries must be 0 or 1");
    }
  }
}

void validate_groups(const std::vector<std::vector<int>>& groups, int n) {
  std::vector<char> seen(n, 0);
  for (const auto& group : groups) {
    if (group.empty()) {
      throw std::invalid_argument("grouped_iterative: empty group");
    }
    for (const int idx : group) {
      if (idx < 0 || idx >= n) {
        throw std::invalid_argument("grouped_iterative: group index out of range");
      }
      if (seen[idx]) {
        throw std::invalid_argument("grouped_iterative: element in two groups");
      }
      seen[idx] = 1;
    }
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
    throw std::invalid_argument("grouped_iterative: groups must cover every element");
  }
}

/// Shared sweep core: per step, measures the two uniform assignments of one
/// group and keeps the better. With size-1 groups this is exactly the
/// element-by-element method.
OptimizationTrace sweep_groups(PowerOracle& oracle,
                               const std::vector<std::vector<int>>& groups,
                               std::vector<std::uint8_t> config, int max_passes) {
  if (max_passes < 1) {
    throw std::invalid_argument("optimizer: max_passes must be >= 1");
  }

  OptimizationTrace trace;
  const std::uint64_t evals_at_start = oracle.eval_count();
  double running_best = -std::numeric_limits<double>::infinity();
  double last_power = 0.0;
  int step = 0;
  int passes_done = 0;
  bool converged = false;

  std::vector<std::uint8_t> saved;
  while (passes_done < max_passes && !converged) {
    bool pass_changed = false;
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
      const std::vector<int>& group = groups[gi];
      saved.resize(group.size());
      bool uniform = true;
      for (std::size_t k = 0; k < group.size(); ++k) {
        saved[k] = config[group[k]];
        uniform = uniform && saved[k] == saved[0];
      }
      const auto set_group = [&](std::uint8_t s) {
        for (const int idx : group) config[idx] = s;
      };

      set_group(0);
      const double p0 = oracle.measure(config);
      set_group(1);
      const double p1 = oracle.measure(config);

      std::uint8_t chosen;
      if (p0 == p1) {
        chosen = uniform ? saved[0] : 0;  // ties keep a uniform incumbent
      } else {
        chosen = p1 > p0 ? 1 : 0;
      }
      set_group(chosen);
      const double chosen_power = chosen ? p1 : p0;

      bool accepted = false;
      for (const std::uint8_t s : saved) accepted = accepted || s != chosen;
      pass_changed = pass_changed || accepted;

      running_best = std::max(running_best, chosen_power);
      last_power = chosen_power;
      trace.steps.push_back({step, static_cast<int>(gi), passes_done, accepted,
                             running_best});
      if (accepted) trace.best_power_sequence.push_back(running_best);
      ++step;
    }
    ++passes_done;
    converged = !pass_changed;
  }

  trace.final_config = std::move(config);
  trace.final_power_w = last_power;
  trace.evaluations = oracle.eval_count() - evals_at_start;
  trace.passes = passes_done;
  return trace;
}

}  // namespace

OptimizationTrace iterative(PowerOracle& oracle, int n,
                            const std::vector<std::uint8_t>& initial,
                            int max_passes) {
  if (n < 1) throw std::invalid_argument("iterative: need at least one element");
  if (static_cast<int>(initial.size()) != n) {
    throw std::invalid_argument("iterative: initial config length mismatch");
  }
  check_bits(initial, "iterative");
  return sweep_groups(oracle, consecutive_groups(n, 1), initial, max_passes);
}

OptimizationTrace grouped_iterative(PowerOracle& oracle,
                                    const std::vector<std::vector<int>>& groups,
                                    const std::vector<std::uint8_t>& initial,
                                    int max_passes) {
  if (initial.empty()) {
    throw std::invalid_argument("grouped_iterative: need at least one element");
  }
  check_bits(initial, "grouped_iterative");
  validate_groups(groups, static_cast<int>(initial.size()));
  return sweep_groups(oracle, groups, initial, max_passes);
}

OptimizationTrace grouped_iterative(PowerOracle& oracle, int n, int group_size,
                                    const std::vector<std::uint8_t>& initial,
                                    int max_passes) {
  if (static_cast<int>(initial.size()) != n) {
    throw std::invalid_argument("grouped_iterative: initial config length mismatch");
  }
  return grouped_iterative(oracle, consecutive_groups(n, group_size), initial,
                           max_passes);
}

std::vector<std::vector<int>> consecutive_groups(int n, int group_size) {
  if (n < 1) throw std::invalid_argument("consecutive_groups: n must be >= 1");
  if (group_size < 1) {
    throw std::invalid_argument("consecutive_groups: group size must be >= 1");
  }
  std::vector<std::vector<int>> groups;
  for (int start = 0; start < n; start += group_size) {
    std::vector<int> group;
    for (int i = start; i < std::min(start + group_size, n); ++i) {
      group.push_back(i);
    }
    groups.push_back(std::move(group));
  }
  return groups;
}

std::vector<std::vector<int>> tile2x2_groups(const BlockLayout& layout) {
  layout.validate();
  const int dim = BlockLayout::kBlockDim;
  const int elem_rows = layout.block_rows * dim;
  const int elem_cols = layout.block_cols * dim;
  const auto index_of = [&](int row, int col) {
    const int br = row / dim, er = row % dim;
    const int bc = col / dim, ec = col % dim;
    return ((br * layout.block_cols + bc) * dim + er) * dim + ec;
  };
  std::vector<std::vector<int>> groups;
  for (int tr = 0; tr < elem_rows / 2; ++tr) {
    for (int tc = 0; tc < elem_cols / 2; ++tc) {
      groups.push_back({index_of(2 * tr, 2 * tc), index_of(2 * tr, 2 * tc + 1),
                        index_of(2 * tr + 1, 2 * tc),
                        index_of(2 * tr + 1, 2 * tc + 1)});
    }
  }
  return groups;
}

std::uint8_t nearest_binary_state(double desired_phase) {
  return angular_distance(desired_phase, 0.0) <= angular_distance(desired_phase, kPi)
             ? 0
             : 1;
}

std::vector<std::uint8_t> location_based(const LinkGeometry& estimate,
                                         const RisSurface& surface,
                                         double wavelength_m) {
  if (!(wavelength_m > 0.0)) {
    throw std::invalid_argument("location_based: wavelength must be positive");
  }
  std::vector<std::uint8_t> config;
  config.reserve(surface.element_positions.size());
  for (const Vec3& p : surface.element_positions) {
    const double d_tx = distance(estimate.tx_pos, p);
    const double d_rx = distance(p, estimate.rx_pos);
    if (!(d_tx > 0.0) || !(d_rx > 0.0)) {
      throw std::invalid_argument("location_based: terminal coincides with an element");
    }
    config.push_back(
        nearest_binary_state(phase_for_distance(d_tx + d_rx, wavelength_m)));
  }
  return config;
}

namespace {

std::vector<double> axis_points(double lo, double hi, double step) {
  if (hi < lo) throw std::invalid_argument("grid_search: ill-formed region");
  const int count = 1 + static_cast<int>(std::floor((hi - lo) / step + 1e-9));
  std::vector<double> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) out.push_back(lo + k * step);
  return out;
}

std::vector<Vec3> box_points(const Box3& box, double step) {
  const std::vector<double> xs = axis_points(box.lo.x, box.hi.x, step);
  const std::vector<double> ys = axis_points(box.lo.y, box.hi.y, step);
  const std::vector<double> zs = axis_points(box.lo.z, box.hi.z, step);
  std::vector<Vec3> out;
  out.reserve(xs.size() * ys.size() * zs.size());
  for (const double x : xs) {
    for (const double y : ys) {
      for (const double z : zs) out.push_back({x, y, z});
    }
  }
  return out;
}

}  // namespace

GridSearchResult grid_search(const Box3& tx_region, const Box3& rx_region,
                             double step_m, const RisSurface& surface,
                             PowerOracle& oracle, double wavelength_m) {
  if (!(step_m > 0.0)) {
    throw std::invalid_argument("grid_search: step must be positive");
  }
  const std::vector<Vec3> tx_points = box_points(tx_region, step_m);
  const std::vector<Vec3> rx_points = box_points(rx_region, step_m);

  GridSearchResult best;
  best.best_power_w = -std::numeric_limits<double>::infinity();
  for (const Vec3& tx : tx_points) {
    for (const Vec3& rx : rx_points) {
      LinkGeometry estimate;
      estimate.tx_pos = tx;
      estimate.ris_center = surface.center;
      estimate.rx_pos = rx;
      estimate.ris_normal = surface.normal;
      estimate.carrier_freq_hz = kSpeedOfLightMps / wavelength_m;
      std::vector<std::uint8_t> config =
          location_based(estimate, surface, wavelength_m);
      const double p = oracle.measure(config);
      ++best.evaluations;
      if (p > best.best_power_w) {
        best.best_power_w = p;
        best.config = std::move(config);
        best.best_tx = tx;
        best.best_rx = rx;
      }
    }
  }
  return best;
}

BruteForceResult brute_force(PowerOracle& oracle, int n) {
  if (n < 0 || n > 24) {
    throw std::invalid_argument("brute_force: element count must lie in [0, 24]");
  }
  const std::uint64_t total = std::uint64_t{1} << n;
  std::vector<std::uint8_t> config(n, 0);
  BruteForceResult best;
  best.power_w = -std::numeric_limits<double>::infinity();
  for (std::uint64_t counter = 0; counter < total; ++counter) {
    for (int i = 0; i < n; ++i) {
      config[i] = static_cast<std::uint8_t>((counter >> (n - 1 - i)) & 1);
    }
    const double p = oracle.measure(config);
    if (p > best.power_w) {
      best.power_w = p;
      best.config = config;
    }
  }
  return best;
}

std::string trace_to_csv(const OptimizationTrace& trace) {
  std::string out = "step,element_or_group_index,pass,accepted,best_power_dbm\n";
  for (const TraceStep& s : trace.steps) {
    out += format("%d,%d,%d,%d,%.6f\n", s.step, s.element_or_group_index, s.pass,
                  s.accepted ? 1 : 0, w_to_dbm_floored(s.best_power_w));
  }
  return out;
}

}  // namespace risim
