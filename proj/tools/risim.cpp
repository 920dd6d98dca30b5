#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "risim/coverage.hpp"
#include "risim/harness.hpp"
#include "risim/kpi.hpp"
#include "risim/propagation.hpp"
#include "risim/scenario.hpp"
#include "risim/textio.hpp"
#include "risim/units.hpp"

namespace {

// Exit codes: 0 success, 1 validation/config error, 2 file I/O error.
// Command-line parse errors use CLI11's own distinct nonzero codes.
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

struct RunArgs {
  std::string config_path;
  std::string out_dir = "out";
  std::string seed_text;  // empty = keep the config's master_seed
  int threads = 1;
};

risim::Vec3 parse_comma_vec3(const std::string& text, const std::string& what) {
  const std::vector<std::string> parts = risim::split(text, ',');
  if (parts.size() != 3) {
    throw std::invalid_argument(what + ": expected x,y,z");
  }
  return {risim::parse_double(parts[0], what), risim::parse_double(parts[1], what),
          risim::parse_double(parts[2], what)};
}

risim::ScenarioConfig load_scenario(const RunArgs& args) {
  risim::ScenarioConfig config = risim::parse_scenario_file(args.config_path);
  if (!args.seed_text.empty()) {
    config.master_seed = risim::parse_u64(args.seed_text, "--seed");
  }
  config.validate();
  for (const std::string& warning : config.warnings()) {
    std::fprintf(stderr, "warning: %s\n", warning.c_str());
  }
  return config;
}

void report_outputs(const RunArgs& args, const std::vector<std::string>& files) {
  for (const std::string& name : files) {
    std::printf("wrote %s/%s\n", args.out_dir.c_str(), name.c_str());
  }
}

int run_phase(int phase, const RunArgs& args) {
  const risim::ScenarioConfig config = load_scenario(args);
  risim::RunResult result;
  switch (phase) {
    case 1: result = risim::run_phase1(config, args.threads); break;
    case 2: result = risim::run_phase2(config, args.threads); break;
    default: result = risim::run_phase3(config, args.threads); break;
  }
  report_outputs(args, risim::write_run_outputs(result, args.out_dir));
  if (result.has_kpis) {
    std::printf("%s\n", risim::gain_summary_line(result.gains).c_str());
  }
  std::printf("cells=%zu\n", result.cells.size());
  return 0;
}

int run_optimize(const RunArgs& args) {
  const risim::ScenarioConfig config = load_scenario(args);
  const risim::RunResult result = risim::run_single(config, args.threads);
  std::vector<std::string> files = risim::write_run_outputs(result, args.out_dir);
  const risim::OptimizerOutcome& outcome = result.cells.front().outcomes.front();
  if (!outcome.trace.steps.empty()) {
    risim::write_text_file(args.out_dir + "/trace.csv",
                           risim::trace_to_csv(outcome.trace));
    files.push_back("trace.csv");
  }
  report_outputs(args, files);
  std::printf("method=%s power_dbm=%.2f off_dbm=%.2f evaluations=%llu\n",
              outcome.method.c_str(), risim::w_to_dbm_floored(outcome.power_w),
              risim::w_to_dbm_floored(result.cells.front().off_power_w),
              static_cast<unsigned long long>(outcome.evaluations));
  return 0;
}

struct AnalyzeArgs {
  std::string trace_path;
  std::string gnb_text;
  double freq_hz = 3.5e9;
  double drop_threshold_db = 10.0;
  int min_run = 3;
  bool gps = false;
  std::string out_dir;  // optional; empty = stdout only
};

int run_analyze(const AnalyzeArgs& args) {
  risim::DriveTrace trace;
  trace.records = risim::parse_kpi_csv(risim::read_text_file(args.trace_path));
  trace.gnb_pos = parse_comma_vec3(args.gnb_text, "--gnb");
  trace.freq_hz = args.freq_hz;
  if (args.gps) trace = risim::gps_trace_to_local(trace);

  const double offset = risim::fit_fspl_baseline(trace);
  const risim::GapReport report =
      risim::detect_gaps(trace, offset, args.drop_threshold_db, args.min_run);
  const std::string csv = risim::gap_report_to_csv(report);
  std::fputs(csv.c_str(), stdout);
  std::printf("%s\n", risim::gap_summary_line(report).c_str());
  if (!args.out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(args.out_dir, ec);
    if (ec) {
      throw risim::IoError("cannot create output directory '" + args.out_dir +
                           "': " + ec.message());
    }
    risim::write_text_file(args.out_dir + "/gaps.csv", csv);
    std::printf("wrote %s/gaps.csv\n", args.out_dir.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulator for two-state reflecting-surface links in the "
               "3.3-3.8 GHz band"};
  app.require_subcommand(1);

  RunArgs run_args;
  const auto add_run_options = [&run_args](CLI::App* sub) {
    sub->add_option("--config", run_args.config_path, "scenario config file")
        ->required();
    sub->add_option("--out", run_args.out_dir, "output directory");
    sub->add_option("--seed", run_args.seed_text, "master seed override");
    sub->add_option("--threads", run_args.threads,
                    "worker threads (0 = hardware concurrency)");
  };
  CLI::App* phase1 =
      app.add_subcommand("phase1", "short-range sweep: element-by-element vs "
                                   "location-based configuration");
  CLI::App* phase2 =
      app.add_subcommand("phase2", "long-range sweep: adds the grouped method "
                                   "and measurement noise");
  CLI::App* phase3 =
      app.add_subcommand("phase3", "service restoration behind a blocked "
                                   "direct path, with KPI report");
  CLI::App* optimize =
      app.add_subcommand("optimize", "run the config-selected method once and "
                                     "dump its trace");
  add_run_options(phase1);
  add_run_options(phase2);
  add_run_options(phase3);
  add_run_options(optimize);

  AnalyzeArgs analyze_args;
  CLI::App* analyze =
      app.add_subcommand("analyze", "fit the free-space baseline of a KPI "
                                    "trace and flag coverage gaps");
  analyze->add_option("--trace", analyze_args.trace_path, "KPI CSV file")
      ->required();
  analyze->add_option("--gnb", analyze_args.gnb_text, "site position x,y,z")
      ->required();
  analyze->add_option("--freq", analyze_args.freq_hz, "carrier frequency, Hz");
  analyze->add_option("--threshold", analyze_args.drop_threshold_db,
                      "gap threshold below baseline, dB");
  analyze->add_option("--min-run", analyze_args.min_run,
                      "minimum consecutive samples per gap");
  analyze->add_flag("--gps", analyze_args.gps,
                    "positions are WGS-84 lat/lon/alt");
  analyze->add_option("--out", analyze_args.out_dir,
                      "also write gaps.csv under this directory");

  double fspl_distance = 0.0, fspl_freq = 0.0;
  CLI::App* fspl = app.add_subcommand("fspl", "print free-space path loss, dB");
  fspl->add_option("--distance", fspl_distance, "distance, m")->required();
  fspl->add_option("--freq", fspl_freq, "frequency, Hz")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (app.got_subcommand(phase1)) return run_phase(1, run_args);
    if (app.got_subcommand(phase2)) return run_phase(2, run_args);
    if (app.got_subcommand(phase3)) return run_phase(3, run_args);
    if (app.got_subcommand(optimize)) return run_optimize(run_args);
    if (app.got_subcommand(analyze)) return run_analyze(analyze_args);
    if (app.got_subcommand(fspl)) {
      std::printf("%.2f\n", risim::fspl_db(fspl_distance, fspl_freq));
      return 0;
    }
  } catch (const risim::IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return kExitIo;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  }
  return 0;
}
