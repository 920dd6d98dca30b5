#pragma once

#include <optional>
#include <string>
#include <vector>

#include "risim/geometry.hpp"

namespace risim {

enum class ServiceState { Connected, NoAccess };

/// Sentinel values logged for rsrp/sinr when the terminal has no service.
inline constexpr double kNoAccessRsrpDbm = -120.0;
inline constexpr double kNoAccessSinrDb = -10.0;

/// One logged measurement point.
struct KpiRecord {
  double timestamp_s = 0.0;
  std::optional<Vec3> position;  // meters or (lat, lon, alt) per producer
  double rsrp_dbm = 0.0;
  double rsrq_db = 0.0;
  double rssi_dbm = 0.0;
  double sinr_db = 0.0;
  ServiceState service = ServiceState::Connected;
};

/// Receiver-side radio parameters for KPI derivation.
struct RadioConfig {
  static constexpr int kSubcarriersPerRb = 12;

  double bandwidth_hz = 100e6;
  int n_rb = 273;  // 100 MHz at 30 kHz subcarrier spacing
  double noise_figure_db = 7.0;
  double interference_power_w = 0.0;
  double access_threshold_sinr_db = -6.0;    // initial access
  double maintain_threshold_sinr_db = -10.0;  // keeping an existing connection

  int resource_element_count() const { return n_rb * kSubcarriersPerRb; }

  /// Throws std::invalid_argument on non-positive bandwidth or n_rb, negative
  /// interference, or maintain threshold not below the access threshold.
  void validate() const;

  bool operator==(const RadioConfig&) const = default;
};

/// Whether the terminal is trying to establish service or to keep it.
enum class AccessMode { InitialAccess, Maintaining };

/// Maps a wideband signal power to the logged KPI set. RSRP spreads the
/// signal equally over all resource elements; RSSI adds interference and
/// thermal noise; RSRQ is the per-resource-element quality ratio, ≤ 0 dB.
/// Service falls to NoAccess when SINR misses the mode's threshold, which
/// overwrites rsrp/sinr with the logging sentinels. Zero signal is legal and
/// bottoms out at the internal power floor before the threshold test.
KpiRecord derive_kpis(double signal_w, const RadioConfig& radio, AccessMode mode);

/// Per-point comparison of two matched KPI sweeps (surface off vs on).
struct PointGain {
  int index = 0;
  bool comparable = false;  // Connected in both sweeps
  double delta_rsrp_db = 0.0;
  double delta_sinr_db = 0.0;
};

struct GainReport {
  std::vector<PointGain> points;
  int comparable_count = 0;
  int restored_count = 0;  // NoAccess off, Connected on
  int lost_count = 0;      // Connected off, NoAccess on
  double avg_delta_rsrp_db = 0.0;  // over comparable points, 0 when none
  double avg_delta_sinr_db = 0.0;
};

/// Compares matched measurement lists point by point. Deltas and averages
/// cover only points Connected in both lists, keeping sentinel values out of
/// the dB arithmetic. Throws std::invalid_argument on length mismatch.
GainReport gain_report(const std::vector<KpiRecord>& off,
                       const std::vector<KpiRecord>& on);

/// CSV schema shared with the coverage tooling.
std::string kpi_csv_header();
std::string kpi_to_csv_row(const KpiRecord& record);

/// Parses a full CSV document (header plus rows). Throws
/// std::invalid_argument on schema or field errors.
std::vector<KpiRecord> parse_kpi_csv(const std::string& text);

}  // namespace risim
