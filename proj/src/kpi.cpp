#include "risim/kpi.hpp"

#include <cmath>
#include <stdexcept>

#include "risim/propagation.hpp"
#include "risim/textio.hpp"
#include "risim/units.hpp"

namespace risim {

void RadioConfig::validate() const {
  if (!(bandwidth_hz > 0.0)) {
    throw std::invalid_argument("radio config: bandwidth must be positive");
  }
  if (n_rb < 1) {
    throw std::invalid_argument("radio config: resource block count must be >= 1");
  }
  if (!(interference_power_w >= 0.0)) {
    throw std::invalid_argument("radio config: interference power must be >= 0");
  }
  if (!(maintain_threshold_sinr_db < access_threshold_sinr_db)) {
    throw std::invalid_argument(
        "radio config: maintain threshold must lie below the access threshold");
  }
}

KpiRecord derive_kpis(double signal_w, const RadioConfig& radio, AccessMode mode) {
  radio.validate();
  if (!(signal_w >= 0.0)) {
    throw std::invalid_argument("derive_kpis: signal power must be >= 0");
  }

  const double noise_w = noise_power_w(radio.bandwidth_hz, radio.noise_figure_db);
  const double denom_w = radio.interference_power_w + noise_w;
  const double rsrp_w = signal_w / radio.resource_element_count();
  const double rssi_w = signal_w + denom_w;

  KpiRecord record;
  record.rsrp_dbm = w_to_dbm_floored(rsrp_w);
  record.rssi_dbm = w_to_dbm_floored(rssi_w);
  record.sinr_db = linear_to_db(std::max(signal_w / denom_w, kPowerFloorW));
  // Per-resource-element quality: signal share of everything received.
  record.rsrq_db = linear_to_db(std::max(signal_w / rssi_w, kPowerFloorW));

  const double threshold_db = mode == AccessMode::InitialAccess
                                  ? radio.access_threshold_sinr_db
                                  : radio.maintain_threshold_sinr_db;
  if (record.sinr_db >= threshold_db) {
    record.service = ServiceState::Connected;
  } else {
    record.service = ServiceState::NoAccess;
    record.rsrp_dbm = kNoAccessRsrpDbm;
    record.sinr_db = kNoAccessSinrDb;
  }
  return record;
}

GainReport gain_report(const std::vector<KpiRecord>& off,
                       const std::vector<KpiRecord>& on) {
  if (off.size() != on.size()) {
    throw std::invalid_argument("gain_report: sweeps differ in length");
  }
  GainReport report;
  double sum_rsrp = 0.0, sum_sinr = 0.0;
  for (std::size_t i = 0; i < off.size(); ++i) {
    const bool off_ok = off[i].service == ServiceState::Connected;
    const bool on_ok = on[i].service == ServiceState::Connected;
    PointGain point;
    point.index = static_cast<int>(i);
    if (off_ok && on_ok) {
      point.comparable = true;
      point.delta_rsrp_db = on[i].rsrp_dbm - off[i].rsrp_dbm;
      point.delta_sinr_db = on[i].sinr_db - off[i].sinr_db;
      sum_rsrp += point.delta_rsrp_db;
      sum_sinr += point.delta_sinr_db;
      ++report.comparable_count;
    } else if (!off_ok && on_ok) {
      ++report.restored_count;
    } else if (off_ok && !on_ok) {
      ++report.lost_count;
    }
    report.points.push_back(point);
  }
  if (report.comparable_count > 0) {
    report.avg_delta_rsrp_db = sum_rsrp / report.comparable_count;
    report.avg_delta_sinr_db = sum_sinr / report.comparable_count;
  }
  return report;
}

std::string kpi_csv_header() {
  return "timestamp_s,lat_or_x_m,lon_or_y_m,alt_or_z_m,rsrp_dbm,rsrq_db,"
         "rssi_dbm,sinr_db,service";
}

std::string kpi_to_csv_row(const KpiRecord& record) {
  const Vec3 pos = record.position.value_or(Vec3{});
  return format("%.3f,%.10g,%.10g,%.10g,%.2f,%.2f,%.2f,%.2f,%s",
                record.timestamp_s, pos.x, pos.y, pos.z, record.rsrp_dbm,
                record.rsrq_db, record.rssi_dbm, record.sinr_db,
                record.service == ServiceState::Connected ? "Connected"
                                                          : "NoAccess");
}

std::vector<KpiRecord> parse_kpi_csv(const std::string& text) {
  const std::vector<std::string> lines = split(text, '\n');
  if (lines.empty() || std::string(trim(lines[0])) != kpi_csv_header()) {
    throw std::invalid_argument("kpi csv: missing or wrong header");
  }
  std::vector<KpiRecord> records;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    if (trim(lines[li]).empty()) continue;
    const std::vector<std::string> fields = split(std::string(trim(lines[li])), ',');
    if (fields.size() != 9) {
      throw std::invalid_argument(
          format("kpi csv: line %zu has %zu fields, expected 9", li + 1,
                 fields.size()));
    }
    KpiRecord record;
    record.timestamp_s = parse_double(fields[0], "kpi csv timestamp");
    record.position = Vec3{parse_double(fields[1], "kpi csv x"),
                           parse_double(fields[2], "kpi csv y"),
                           parse_double(fields[3], "kpi csv z")};
    record.rsrp_dbm = parse_double(fields[4], "kpi csv rsrp");
    record.rsrq_db = parse_double(fields[5], "kpi csv rsrq");
    record.rssi_dbm = parse_double(fields[6], "kpi csv rssi");
    record.sinr_db = parse_double(fields[7], "kpi csv sinr");
    const std::string_view service = trim(fields[8]);
    if (service == "Connected") {
      record.service = ServiceState::Connected;
    } else if (service == "NoAccess") {
      record.service = ServiceState::NoAccess;
    } else {
      throw std::invalid_argument("kpi csv: unknown service state '" +
                                  std::string(service) + "'");
    }
    records.push_back(record);
  }
  return records;
}

}  // namespace risim
