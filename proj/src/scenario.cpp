#include "risim/scenario.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "risim/textio.hpp"
#include "risim/units.hpp"

namespace risim {

namespace {

Vec3 parse_vec3(std::string_view value, const std::string& what) {
  std::istringstream in{std::string(value)};
  Vec3 v;
  std::string extra;
  if (!(in >> v.x >> v.y >> v.z) || (in >> extra)) {
    throw std::invalid_argument(what + ": expected three numbers, got '" +
                                std::string(value) + "'");
  }
  return v;
}

std::string vec3_text(const Vec3& v) {
  return format_exact(v.x) + " " + format_exact(v.y) + " " + format_exact(v.z);
}

[[noreturn]] void bad_value(const std::string& key, std::string_view value) {
  throw std::invalid_argument("config key '" + key + "': unsupported value '" +
                              std::string(value) + "'");
}

std::optional<double> parse_optional_db(std::string_view value,
                                        const std::string& key) {
  if (trim(value) == "off") return std::nullopt;
  return parse_double(value, key);
}

}  // namespace

void ScenarioConfig::validate() const {
  if (name.empty()) {
    throw std::invalid_argument("scenario: name must not be empty");
  }
  if (trials < 1) {
    throw std::invalid_argument("scenario: trials must be >= 1");
  }
  layout.validate();
  model.validate();
  radio.validate();
  if (tx_positions.empty() || rx_positions.empty()) {
    throw std::invalid_argument("scenario: need at least one tx and one rx position");
  }
  for (const Vec3& p : tx_positions) {
    if (!finite(p)) throw std::invalid_argument("scenario: non-finite tx position");
  }
  for (const Vec3& p : rx_positions) {
    if (!finite(p)) throw std::invalid_argument("scenario: non-finite rx position");
  }
  if (!finite(ris_center) || !finite(ris_normal)) {
    throw std::invalid_argument("scenario: non-finite surface placement");
  }
  if (std::fabs(norm(ris_normal) - 1.0) > 1e-6) {
    throw std::invalid_argument("scenario: surface normal must be unit length");
  }
  if (!(freq_hz > 0.0)) {
    throw std::invalid_argument("scenario: carrier frequency must be positive");
  }
  if (!std::isfinite(tx_power_dbm)) {
    throw std::invalid_argument("scenario: tx power must be finite");
  }
  if (optimizer.group_size < 1) {
    throw std::invalid_argument("scenario: optimizer group size must be >= 1");
  }
  if (optimizer.max_passes < 1) {
    throw std::invalid_argument("scenario: optimizer max passes must be >= 1");
  }
  if (!(optimizer.grid_extent_m >= 0.0) || !(optimizer.grid_step_m > 0.0)) {
    throw std::invalid_argument("scenario: grid extent must be >= 0 and step > 0");
  }
}

std::vector<std::string> ScenarioConfig::warnings() const {
  std::vector<std::string> out;
  if (freq_hz < 3.3e9 || freq_hz > 3.8e9) {
    out.push_back(format(
        "carrier %.4g GHz lies outside the 3.3-3.8 GHz band this tool targets",
        freq_hz / 1e9));
  }
  return out;
}

ScenarioConfig parse_scenario(const std::string& text) {
  ScenarioConfig c;
  std::string section;
  int lineno = 0;
  for (const std::string& raw : split(text, '\n')) {
    ++lineno;
    const std::string_view line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        throw std::invalid_argument(
            format("config line %d: unterminated section header", lineno));
      }
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section != "scenario" && section != "surface" && section != "geometry" &&
          section != "channel" && section != "radio" && section != "optimizer") {
        throw std::invalid_argument(
            format("config line %d: unknown section [%s]", lineno, section.c_str()));
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument(
          format("config line %d: expected 'key = value'", lineno));
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));

    if (section == "scenario") {
      if (key == "name") {
        c.name = std::string(value);
      } else if (key == "trials") {
        c.trials = static_cast<int>(parse_long(value, key));
      } else if (key == "master_seed") {
        c.master_seed = parse_u64(value, key);
      } else {
        bad_value(key, value);
      }
    } else if (section == "surface") {
      if (key == "block_rows") {
        c.layout.block_rows = static_cast<int>(parse_long(value, key));
      } else if (key == "block_cols") {
        c.layout.block_cols = static_cast<int>(parse_long(value, key));
      } else if (key == "center") {
        c.ris_center = parse_vec3(value, key);
      } else if (key == "normal") {
        c.ris_normal = parse_vec3(value, key);
      } else {
        bad_value(key, value);
      }
    } else if (section == "geometry") {
      if (key == "tx") {
        c.tx_positions.push_back(parse_vec3(value, key));
      } else if (key == "rx") {
        c.rx_positions.push_back(parse_vec3(value, key));
      } else {
        bad_value(key, value);
      }
    } else if (section == "channel") {
      if (key == "freq_hz") {
        c.freq_hz = parse_double(value, key);
      } else if (key == "tx_power_dbm") {
        c.tx_power_dbm = parse_double(value, key);
      } else if (key == "path_loss") {
        if (value == "fspl") c.model.kind = PathLossKind::Fspl;
        else if (value == "log_distance") c.model.kind = PathLossKind::LogDistance;
        else bad_value(key, value);
      } else if (key == "exponent") {
        c.model.exponent = parse_double(value, key);
      } else if (key == "reference_distance_m") {
        c.model.reference_distance_m = parse_double(value, key);
      } else if (key == "fading") {
        if (value == "none") c.model.fading = FadingKind::None;
        else if (value == "rayleigh") c.model.fading = FadingKind::Rayleigh;
        else if (value == "rician") c.model.fading = FadingKind::Rician;
        else bad_value(key, value);
      } else if (key == "rician_k_db") {
        c.model.rician_k_db = parse_double(value, key);
      } else if (key == "tx_gain_dbi") {
        c.model.tx_gain_dbi = parse_double(value, key);
      } else if (key == "rx_gain_dbi") {
        c.model.rx_gain_dbi = parse_double(value, key);
      } else if (key == "direct_path") {
        if (value == "absent") c.direct_path_present = false;
        else if (value == "present") c.direct_path_present = true;
        else bad_value(key, value);
      } else if (key == "blockage_db") {
        c.model.blockage_extra_loss_db = parse_double(value, key);
      } else {
        bad_value(key, value);
      }
    } else if (section == "radio") {
      if (key == "bandwidth_hz") {
        c.radio.bandwidth_hz = parse_double(value, key);
      } else if (key == "n_rb") {
        c.radio.n_rb = static_cast<int>(parse_long(value, key));
      } else if (key == "noise_figure_db") {
        c.radio.noise_figure_db = parse_double(value, key);
      } else if (key == "interference_w") {
        c.radio.interference_power_w =
            trim(value) == "off" ? 0.0 : parse_double(value, key);
      } else if (key == "access_threshold_sinr_db") {
        c.radio.access_threshold_sinr_db = parse_double(value, key);
      } else if (key == "maintain_threshold_sinr_db") {
        c.radio.maintain_threshold_sinr_db = parse_double(value, key);
      } else {
        bad_value(key, value);
      }
    } else if (section == "optimizer") {
      if (key == "method") {
        if (value == "iterative") c.optimizer.kind = OptimizerKind::Iterative;
        else if (value == "grouped") c.optimizer.kind = OptimizerKind::Grouped;
        else if (value == "location") c.optimizer.kind = OptimizerKind::Location;
        else if (value == "grid") c.optimizer.kind = OptimizerKind::Grid;
        else if (value == "brute") c.optimizer.kind = OptimizerKind::Brute;
        else bad_value(key, value);
      } else if (key == "group_size") {
        c.optimizer.group_size = static_cast<int>(parse_long(value, key));
      } else if (key == "group_scheme") {
        if (value == "consecutive") c.optimizer.scheme = GroupScheme::Consecutive;
        else if (value == "tile2x2") c.optimizer.scheme = GroupScheme::Tile2x2;
        else bad_value(key, value);
      } else if (key == "max_passes") {
        c.optimizer.max_passes = static_cast<int>(parse_long(value, key));
      } else if (key == "measurement_noise_dbm") {
        c.optimizer.measurement_noise_dbm = parse_optional_db(value, key);
      } else if (key == "grid_extent_m") {
        c.optimizer.grid_extent_m = parse_double(value, key);
      } else if (key == "grid_step_m") {
        c.optimizer.grid_step_m = parse_double(value, key);
      } else if (key == "tx_estimate_error") {
        c.optimizer.tx_estimate_error = parse_vec3(value, key);
      } else if (key == "rx_estimate_error") {
        c.optimizer.rx_estimate_error = parse_vec3(value, key);
      } else {
        bad_value(key, value);
      }
    } else {
      throw std::invalid_argument(
          format("config line %d: key outside any section", lineno));
    }
  }
  return c;
}

ScenarioConfig parse_scenario_file(const std::string& path) {
  return parse_scenario(read_text_file(path));
}

std::string serialize_scenario(const ScenarioConfig& c) {
  std::string out;
  out += "[scenario]\n";
  out += "name = " + c.name + "\n";
  out += "trials = " + std::to_string(c.trials) + "\n";
  out += "master_seed = " + std::to_string(c.master_seed) + "\n\n";

  out += "[surface]\n";
  out += "block_rows = " + std::to_string(c.layout.block_rows) + "\n";
  out += "block_cols = " + std::to_string(c.layout.block_cols) + "\n";
  out += "center = " + vec3_text(c.ris_center) + "\n";
  out += "normal = " + vec3_text(c.ris_normal) + "\n\n";

  out += "[geometry]\n";
  for (const Vec3& p : c.tx_positions) out += "tx = " + vec3_text(p) + "\n";
  for (const Vec3& p : c.rx_positions) out += "rx = " + vec3_text(p) + "\n";
  out += "\n";

  out += "[channel]\n";
  out += "freq_hz = " + format_exact(c.freq_hz) + "\n";
  out += "tx_power_dbm = " + format_exact(c.tx_power_dbm) + "\n";
  out += std::string("path_loss = ") +
         (c.model.kind == PathLossKind::Fspl ? "fspl" : "log_distance") + "\n";
  out += "exponent = " + format_exact(c.model.exponent) + "\n";
  out += "reference_distance_m = " + format_exact(c.model.reference_distance_m) + "\n";
  out += std::string("fading = ") +
         (c.model.fading == FadingKind::None
              ? "none"
              : c.model.fading == FadingKind::Rayleigh ? "rayleigh" : "rician") +
         "\n";
  out += "rician_k_db = " + format_exact(c.model.rician_k_db) + "\n";
  out += "tx_gain_dbi = " + format_exact(c.model.tx_gain_dbi) + "\n";
  out += "rx_gain_dbi = " + format_exact(c.model.rx_gain_dbi) + "\n";
  out += std::string("direct_path = ") +
         (c.direct_path_present ? "present" : "absent") + "\n";
  out += "blockage_db = " + format_exact(c.model.blockage_extra_loss_db) + "\n\n";

  out += "[radio]\n";
  out += "bandwidth_hz = " + format_exact(c.radio.bandwidth_hz) + "\n";
  out += "n_rb = " + std::to_string(c.radio.n_rb) + "\n";
  out += "noise_figure_db = " + format_exact(c.radio.noise_figure_db) + "\n";
  out += "interference_w = " + (c.radio.interference_power_w == 0.0
                                    ? std::string("off")
                                    : format_exact(c.radio.interference_power_w)) +
         "\n";
  out += "access_threshold_sinr_db = " +
         format_exact(c.radio.access_threshold_sinr_db) + "\n";
  out += "maintain_threshold_sinr_db = " +
         format_exact(c.radio.maintain_threshold_sinr_db) + "\n\n";

  out += "[optimizer]\n";
  const char* method = "iterative";
  switch (c.optimizer.kind) {
    case OptimizerKind::Iterative: method = "iterative"; break;
    case OptimizerKind::Grouped: method = "grouped"; break;
    case OptimizerKind::Location: method = "location"; break;
    case OptimizerKind::Grid: method = "grid"; break;
    case OptimizerKind::Brute: method = "brute"; break;
  }
  out += std::string("method = ") + method + "\n";
  out += "group_size = " + std::to_string(c.optimizer.group_size) + "\n";
  out += std::string("group_scheme = ") +
         (c.optimizer.scheme == GroupScheme::Consecutive ? "consecutive"
                                                         : "tile2x2") +
         "\n";
  out += "max_passes = " + std::to_string(c.optimizer.max_passes) + "\n";
  out += "measurement_noise_dbm = " +
         (c.optimizer.measurement_noise_dbm
              ? format_exact(*c.optimizer.measurement_noise_dbm)
              : std::string("off")) +
         "\n";
  out += "grid_extent_m = " + format_exact(c.optimizer.grid_extent_m) + "\n";
  out += "grid_step_m = " + format_exact(c.optimizer.grid_step_m) + "\n";
  out += "tx_estimate_error = " + vec3_text(c.optimizer.tx_estimate_error) + "\n";
  out += "rx_estimate_error = " + vec3_text(c.optimizer.rx_estimate_error) + "\n";
  return out;
}

}  // namespace risim
