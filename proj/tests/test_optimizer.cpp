#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "risim/optimizer.hpp"
#include "risim/rng.hpp"
#include "risim/surface.hpp"
#include "risim/units.hpp"

using namespace risim;
using risim::test::random_instance;

namespace {

/// Cascade coefficients with unit amplitude and the given state-0 sum phase.
ChannelRealization phased_instance(const std::vector<double>& cascade_phases,
                                   double direct_amplitude = 0.0) {
  ChannelRealization r;
  r.noise_power_w = 1e-12;
  for (const double phase : cascade_phases) {
    r.h.push_back({1.0, wrap_two_pi(-phase)});
    r.g.push_back({1.0, 0.0});
  }
  r.direct = {direct_amplitude, 0.0};
  return r;
}

bool non_decreasing(const std::vector<double>& xs) {
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (xs[i] < xs[i - 1]) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("channel oracle measures, counts, and reports true power") {
  const ChannelRealization r = random_instance(16, 52);
  ChannelPowerOracle oracle(r, 2.0);
  Rng rng(3);
  std::vector<std::uint8_t> config(16);
  for (int trial = 0; trial < 25; ++trial) {
    for (auto& b : config) b = rng.next_u64() & 1;
    const double want = received_signal_power_w(r, config, 2.0);
    CHECK(oracle.true_power(config) == want);
    CHECK(oracle.measure(config) == want);  // sigma = 0: measurement is exact
  }
  CHECK(oracle.eval_count() == 25);

  ChannelPowerOracle noisy(r, 2.0, 1e-3, 77);
  const std::vector<std::uint8_t> zeros(16, 0);
  const double truth = noisy.true_power(zeros);
  int exact = 0;
  for (int i = 0; i < 50; ++i) {
    const double m = noisy.measure(zeros);
    CHECK(m >= 0.0);
    if (m == truth) ++exact;
  }
  CHECK(exact == 0);

  // Huge noise must clamp at zero rather than going negative.
  ChannelPowerOracle loud(r, 1e-30, 1.0, 5);
  double lo = 1.0;
  for (int i = 0; i < 50; ++i) lo = std::min(lo, loud.measure(zeros));
  CHECK(lo == 0.0);

  CHECK_THROWS_AS((void)oracle.true_power(std::vector<std::uint8_t>(3, 0)),
                  std::invalid_argument);
}

TEST_CASE("element sweep on a flat landscape converges in one pass") {
  CallbackPowerOracle oracle([](std::span<const std::uint8_t>) { return 1.0; });
  const auto trace = iterative(oracle, 5, std::vector<std::uint8_t>(5, 0));
  CHECK(trace.passes == 1);
  CHECK(trace.evaluations == 10);
  CHECK(oracle.eval_count() == 10);
  CHECK(trace.steps.size() == 5);
  CHECK(trace.best_power_sequence.empty());
  for (const auto& s : trace.steps) CHECK_FALSE(s.accepted);
  CHECK(trace.final_config == std::vector<std::uint8_t>(5, 0));
}

TEST_CASE("element sweep flips a single element against a direct path") {
  // Cascade phase pi at state 0 cancels the direct path; state 1 aligns.
  ChannelRealization r = phased_instance({kPi}, 1.0);
  ChannelPowerOracle oracle(r, 1.0);
  const auto trace = iterative(oracle, 1, {0});
  CHECK(trace.final_config == std::vector<std::uint8_t>{1});
  CHECK(trace.final_power_w == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(trace.passes == 2);  // second pass confirms convergence
  CHECK(trace.evaluations == 4);
  CHECK(trace.best_power_sequence.size() == 1);
  CHECK(trace.steps[0].accepted);
  CHECK_FALSE(trace.steps[1].accepted);
}

TEST_CASE("element sweep reaches a one-flip local optimum") {
  for (int seed = 0; seed < 5; ++seed) {
    const ChannelRealization r = random_instance(10, 600 + seed);
    ChannelPowerOracle oracle(r, 1.0);
    const auto trace = iterative(oracle, 10, std::vector<std::uint8_t>(10, 0));
    const double final_power = oracle.true_power(trace.final_config);
    CHECK(trace.final_power_w == doctest::Approx(final_power).epsilon(1e-12));
    for (int i = 0; i < 10; ++i) {
      std::vector<std::uint8_t> flipped = trace.final_config;
      flipped[i] = 1 - flipped[i];
      CHECK(oracle.true_power(flipped) <= final_power * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("best-power records never decrease, even under measurement noise") {
  const ChannelRealization r = random_instance(32, 11);
  SUBCASE("noise-free") {
    ChannelPowerOracle oracle(r, 1.0);
    const auto trace = iterative(oracle, 32, std::vector<std::uint8_t>(32, 0));
    CHECK(non_decreasing(trace.best_power_sequence));
    std::vector<double> by_step;
    for (const auto& s : trace.steps) by_step.push_back(s.best_power_w);
    CHECK(non_decreasing(by_step));
  }
  SUBCASE("noisy oracle") {
    const double scale = optimal_continuous_power_w(r, 1.0);
    ChannelPowerOracle oracle(r, 1.0, 0.2 * scale, 99);
    const auto trace = iterative(oracle, 32, std::vector<std::uint8_t>(32, 0));
    CHECK(trace.passes == 3);  // noise keeps it from converging early
    CHECK(non_decreasing(trace.best_power_sequence));
    std::vector<double> by_step;
    for (const auto& s : trace.steps) by_step.push_back(s.best_power_w);
    CHECK(non_decreasing(by_step));
  }
}

TEST_CASE("unit groups reproduce the element sweep exactly") {
  const ChannelRealization r = random_instance(12, 21);
  ChannelPowerOracle a(r, 1.0);
  ChannelPowerOracle b(r, 1.0);
  const std::vector<std::uint8_t> initial(12, 0);
  const auto ti = iterative(a, 12, initial);
  const auto tg = grouped_iterative(b, 12, 1, initial);
  CHECK(ti.final_config == tg.final_config);
  CHECK(ti.evaluations == tg.evaluations);
  CHECK(ti.passes == tg.passes);
  REQUIRE(ti.steps.size() == tg.steps.size());
  for (std::size_t i = 0; i < ti.steps.size(); ++i) {
    CHECK(ti.steps[i].accepted == tg.steps[i].accepted);
    CHECK(ti.steps[i].best_power_w == tg.steps[i].best_power_w);
  }
}

TEST_CASE("group sweep recovers coherent groups") {
  // Elements 0-3 reflect in phase, 4-7 reflect half a turn out of phase.
  std::vector<double> phases(8, 0.0);
  std::fill(phases.begin() + 4, phases.end(), kPi);
  const ChannelRealization r = phased_instance(phases);
  ChannelPowerOracle oracle(r, 1.0);
  const auto trace = grouped_iterative(oracle, 8, 4, std::vector<std::uint8_t>(8, 0));
  CHECK(trace.final_config ==
        std::vector<std::uint8_t>{1, 1, 1, 1, 0, 0, 0, 0});
  // Aligning both groups meets the continuous bound exactly.
  CHECK(oracle.true_power(trace.final_config) ==
        doctest::Approx(optimal_continuous_power_w(r, 1.0)).epsilon(1e-12));
}

TEST_CASE("whole-surface group settles ties on the uniform incumbent") {
  const ChannelRealization r = phased_instance({0.0, 0.0, 0.0, 0.0});
  SUBCASE("incumbent all-zero") {
    ChannelPowerOracle oracle(r, 1.0);
    const auto trace =
        grouped_iterative(oracle, 4, 4, std::vector<std::uint8_t>(4, 0));
    CHECK(trace.final_config == std::vector<std::uint8_t>(4, 0));
    CHECK(trace.passes == 1);
    CHECK(trace.evaluations == 2);
  }
  SUBCASE("incumbent all-one") {
    ChannelPowerOracle oracle(r, 1.0);
    const auto trace =
        grouped_iterative(oracle, 4, 4, std::vector<std::uint8_t>(4, 1));
    CHECK(trace.final_config == std::vector<std::uint8_t>(4, 1));
  }
  SUBCASE("mixed initial groups are forced uniform, ties to zero") {
    CallbackPowerOracle flat([](std::span<const std::uint8_t>) { return 1.0; });
    const auto trace =
        grouped_iterative(flat, 4, 4, std::vector<std::uint8_t>{0, 1, 1, 0});
    CHECK(trace.final_config == std::vector<std::uint8_t>(4, 0));
    CHECK(trace.steps[0].accepted);  // forcing uniform counts as a change
  }
}

TEST_CASE("sweep evaluation counts respect the measurement budget") {
  for (const int group_size : {1, 3, 4, 7, 20}) {
    const int n = 20;
    const ChannelRealization r = random_instance(n, 1000 + group_size);
    const double scale = optimal_continuous_power_w(r, 1.0);
    ChannelPowerOracle oracle(r, 1.0, 0.3 * scale, 42);
    const int max_passes = 3;
    const auto trace = grouped_iterative(oracle, n, group_size,
                                         std::vector<std::uint8_t>(n, 0),
                                         max_passes);
    const std::uint64_t n_groups = (n + group_size - 1) / group_size;
    CHECK(trace.evaluations <= 2 * n_groups * max_passes);
    CHECK(trace.evaluations == oracle.eval_count());
    CHECK(trace.evaluations == 2 * trace.steps.size());
  }
}

TEST_CASE("group partitions are validated") {
  CallbackPowerOracle flat([](std::span<const std::uint8_t>) { return 1.0; });
  const std::vector<std::uint8_t> initial(4, 0);
  CHECK_THROWS_AS(
      (void)grouped_iterative(flat, {{0, 1}, {2}}, initial),  // misses 3
      std::invalid_argument);
  CHECK_THROWS_AS(
      (void)grouped_iterative(flat, {{0, 1}, {1, 2, 3}}, initial),
      std::invalid_argument);
  CHECK_THROWS_AS(
      (void)grouped_iterative(flat, {{0, 1}, {2, 3, 4}}, initial),
      std::invalid_argument);
  CHECK_THROWS_AS((void)grouped_iterative(flat, {{0, 1}, {}, {2, 3}}, initial),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      (void)iterative(flat, 4, std::vector<std::uint8_t>{0, 1, 2, 0}),
      std::invalid_argument);
  CHECK_THROWS_AS((void)iterative(flat, 4, initial, 0), std::invalid_argument);
  CHECK_THROWS_AS((void)iterative(flat, 3, initial), std::invalid_argument);
}

TEST_CASE("consecutive and tiled groupings") {
  const auto groups = consecutive_groups(10, 4);
  REQUIRE(groups.size() == 3);
  CHECK(groups[0] == std::vector<int>{0, 1, 2, 3});
  CHECK(groups[2] == std::vector<int>{8, 9});

  const auto tiles = tile2x2_groups(BlockLayout{1, 2});
  CHECK(tiles.size() == 32);  // 128 elements in tiles of 4
  // First tile: rows 0-1, cols 0-1 of block 0.
  CHECK(tiles[0] == std::vector<int>{0, 1, 8, 9});
  // Tile spanning into the second block starts at column 8.
  CHECK(tiles[4] == std::vector<int>{64, 65, 72, 73});
  std::vector<char> seen(128, 0);
  for (const auto& tile : tiles) {
    REQUIRE(tile.size() == 4);
    for (const int idx : tile) {
      REQUIRE(idx >= 0);
      REQUIRE(idx < 128);
      CHECK_FALSE(seen[idx]);
      seen[idx] = 1;
    }
  }
  CHECK(std::count(seen.begin(), seen.end(), 1) == 128);
}

TEST_CASE("nearest binary state quantizes phase to {0, pi}") {
  CHECK(nearest_binary_state(0.0) == 0);
  CHECK(nearest_binary_state(0.1) == 0);
  CHECK(nearest_binary_state(kPi) == 1);
  CHECK(nearest_binary_state(0.9 * kPi) == 1);
  CHECK(nearest_binary_state(kTwoPi - 0.1) == 0);
  CHECK(nearest_binary_state(-0.2) == 0);
  CHECK(nearest_binary_state(kPi + 0.2) == 1);
  // Exact quarter-turn ties resolve to state 0.
  CHECK(nearest_binary_state(kPi / 2.0) == 0);
}

TEST_CASE("location-based configuration cancels known path lengths") {
  RisSurface s;
  s.center = {0.0, 0.0, 0.0};
  s.normal = {0.0, 1.0, 0.0};
  // Path length sums: 10.0 (wraps to phase 0) and 10.5 (phase pi) at
  // wavelength 1.
  const double y_half = std::sqrt(5.25 * 5.25 - 25.0);
  s.element_positions = {{0.0, 0.0, 0.0}, {0.0, y_half, 0.0}};
  s.config = {0, 0};
  LinkGeometry estimate;
  estimate.tx_pos = {-5.0, 0.0, 0.0};
  estimate.rx_pos = {5.0, 0.0, 0.0};
  const auto config = location_based(estimate, s, 1.0);
  CHECK(config == std::vector<std::uint8_t>{0, 1});

  estimate.tx_pos = {0.0, 0.0, 0.0};  // on top of element 0
  CHECK_THROWS_AS((void)location_based(estimate, s, 1.0),
                  std::invalid_argument);
  estimate.tx_pos = {-5.0, 0.0, 0.0};
  CHECK_THROWS_AS((void)location_based(estimate, s, 0.0),
                  std::invalid_argument);
}

TEST_CASE("binary sweep lands between a quarter and all of the continuous bound") {
  for (int seed = 0; seed < 50; ++seed) {
    const ChannelRealization r = random_instance(64, 3000 + seed);
    ChannelPowerOracle oracle(r, 1.0);
    const auto trace = iterative(oracle, 64, std::vector<std::uint8_t>(64, 0));
    const double bound = optimal_continuous_power_w(r, 1.0);
    const double power = oracle.true_power(trace.final_config);
    CHECK(power <= bound * (1.0 + 1e-12));
    CHECK(power >= 0.25 * bound);
  }
}

TEST_CASE("grid search enumerates candidates in a fixed order") {
  const RisSurface s = tile_blocks({1, 1}, {0.0, 0.0, 0.0}, {0.0, 1.0, 0.0});
  const double lambda = kSpeedOfLightMps / 3.5e9;

  LinkGeometry truth;
  truth.tx_pos = {-3.0, 7.0, 0.5};
  truth.ris_center = s.center;
  truth.rx_pos = {4.0, 6.0, -0.25};
  const PathLossModel model;
  const ChannelRealization r = sample_channel(truth, s, model, 5);

  const Box3 tx_region{{-3.25, 6.75, 0.5}, {-2.75, 7.25, 0.5}};
  const Box3 rx_region{{3.75, 5.75, -0.25}, {4.25, 6.25, -0.25}};
  const double step = 0.25;

  // Independent argmax in the documented order: x, then y, then z; tx outer.
  Vec3 want_tx, want_rx;
  double want_power = -1.0;
  std::uint64_t want_evals = 0;
  {
    ChannelPowerOracle probe(r, 1.0);
    for (int txx = 0; txx <= 2; ++txx) {
      for (int txy = 0; txy <= 2; ++txy) {
        for (int rxx = 0; rxx <= 2; ++rxx) {
          for (int rxy = 0; rxy <= 2; ++rxy) {
            LinkGeometry est = truth;
            est.tx_pos = {tx_region.lo.x + step * txx,
                          tx_region.lo.y + step * txy, 0.5};
            est.rx_pos = {rx_region.lo.x + step * rxx,
                          rx_region.lo.y + step * rxy, -0.25};
            const double p =
                probe.true_power(location_based(est, s, lambda));
            ++want_evals;
            if (p > want_power) {
              want_power = p;
              want_tx = est.tx_pos;
              want_rx = est.rx_pos;
            }
          }
        }
      }
    }
  }

  ChannelPowerOracle oracle(r, 1.0);
  const auto result = grid_search(tx_region, rx_region, step, s, oracle, lambda);
  CHECK(result.evaluations == want_evals);
  CHECK(result.evaluations == 81);
  CHECK(oracle.eval_count() == 81);
  CHECK(result.best_power_w == want_power);
  CHECK(result.best_tx == want_tx);
  CHECK(result.best_rx == want_rx);
  LinkGeometry best_est = truth;
  best_est.tx_pos = want_tx;
  best_est.rx_pos = want_rx;
  CHECK(result.config == location_based(best_est, s, lambda));
}

TEST_CASE("grid search handles degenerate regions and rejects bad input") {
  const RisSurface s = tile_blocks({1, 1}, {0.0, 0.0, 0.0}, {0.0, 1.0, 0.0});
  const double lambda = kSpeedOfLightMps / 3.5e9;
  LinkGeometry truth;
  truth.tx_pos = {-3.0, 7.0, 0.0};
  truth.ris_center = s.center;
  truth.rx_pos = {4.0, 6.0, 0.0};
  const ChannelRealization r = sample_channel(truth, s, PathLossModel{}, 5);
  ChannelPowerOracle oracle(r, 1.0);

  const Box3 point_tx{truth.tx_pos, truth.tx_pos};
  const Box3 point_rx{truth.rx_pos, truth.rx_pos};
  const auto result = grid_search(point_tx, point_rx, 0.25, s, oracle, lambda);
  CHECK(result.evaluations == 1);
  CHECK(result.best_tx == truth.tx_pos);
  CHECK(result.best_rx == truth.rx_pos);

  CHECK_THROWS_AS((void)grid_search(point_tx, point_rx, 0.0, s, oracle, lambda),
                  std::invalid_argument);
  const Box3 bad{{1.0, 0.0, 0.0}, {0.0, 0.0, 0.0}};
  CHECK_THROWS_AS((void)grid_search(bad, point_rx, 0.25, s, oracle, lambda),
                  std::invalid_argument);
}

TEST_CASE("exhaustive search") {
  SUBCASE("beats or matches the sweep on every small instance") {
    for (int seed = 0; seed < 10; ++seed) {
      const ChannelRealization r = random_instance(10, 7100 + seed);
      ChannelPowerOracle a(r, 1.0);
      ChannelPowerOracle b(r, 1.0);
      const auto sweep = iterative(a, 10, std::vector<std::uint8_t>(10, 0));
      const auto brute = brute_force(b, 10);
      CHECK(b.eval_count() == 1024);
      CHECK(brute.power_w >= a.true_power(sweep.final_config) * (1.0 - 1e-12));
      CHECK(brute.power_w ==
            doctest::Approx(b.true_power(brute.config)).epsilon(1e-12));
    }
  }
  SUBCASE("ties keep the lexicographically first config") {
    CallbackPowerOracle oracle([](std::span<const std::uint8_t> c) {
      return (c[0] == 0 && c[1] == 1) || (c[0] == 1 && c[1] == 1) ? 5.0 : 1.0;
    });
    const auto result = brute_force(oracle, 2);
    CHECK(result.config == std::vector<std::uint8_t>{0, 1});
    CHECK(result.power_w == 5.0);
    CHECK(oracle.eval_count() == 4);
  }
  SUBCASE("flat landscape returns the all-zero config") {
    CallbackPowerOracle flat([](std::span<const std::uint8_t>) { return 1.0; });
    CHECK(brute_force(flat, 6).config == std::vector<std::uint8_t>(6, 0));
  }
  SUBCASE("element count is capped") {
    CallbackPowerOracle flat([](std::span<const std::uint8_t>) { return 1.0; });
    CHECK_THROWS_AS((void)brute_force(flat, 25), std::invalid_argument);
    CHECK_THROWS_AS((void)brute_force(flat, -1), std::invalid_argument);
  }
}

TEST_CASE("trace serializes to csv") {
  ChannelRealization r = phased_instance({kPi}, 1.0);
  ChannelPowerOracle oracle(r, 1.0);
  const auto trace = iterative(oracle, 1, {0});
  const std::string csv = trace_to_csv(trace);
  CHECK(csv.rfind("step,element_or_group_index,pass,accepted,best_power_dbm\n",
                  0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') ==
        static_cast<long>(trace.steps.size()) + 1);
  // First decision: step 0, element 0, pass 0, accepted, 4 W = 36.02 dBm.
  CHECK(csv.find("0,0,0,1,36.02") != std::string::npos);
}
