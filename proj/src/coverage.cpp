#include "risim/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "risim/propagation.hpp"
#include "risim/textio.hpp"
#include "risim/units.hpp"

namespace risim {

void DriveTrace::validate() const {
  if (records.empty()) {
    throw std::invalid_argument("drive trace: no samples");
  }
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!records[i].position.has_value()) {
      throw std::invalid_argument(
          format("drive trace: sample %zu has no position", i));
    }
    if (i > 0 && !(records[i].timestamp_s > records[i - 1].timestamp_s)) {
      throw std::invalid_argument(
          format("drive trace: timestamps not strictly increasing at sample %zu", i));
    }
  }
  if (!finite(gnb_pos) || !(freq_hz > 0.0)) {
    throw std::invalid_argument("drive trace: bad site position or carrier");
  }
}

namespace {

double median_of(std::vector<double> values) {
  const std::size_t n = values.size();
  std::sort(values.begin(), values.end());
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

/// Median of |r_i − offset|: the robust misfit the baseline search minimizes.
double median_abs_residual(const std::vector<double>& r, double offset) {
  std::vector<double> abs_res;
  abs_res.reserve(r.size());
  for (const double v : r) abs_res.push_back(std::fabs(v - offset));
  return median_of(std::move(abs_res));
}

}  // namespace

double fit_fspl_baseline(const DriveTrace& trace) {
  trace.validate();
  // r_i is the offset that would make the prediction match sample i exactly.
  std::vector<double> r;
  r.reserve(trace.records.size());
  for (const KpiRecord& record : trace.records) {
    if (record.service != ServiceState::Connected) continue;
    const double d = distance(trace.gnb_pos, *record.position);
    r.push_back(record.rsrp_dbm + fspl_db(d, trace.freq_hz));
  }
  if (r.empty()) {
    throw std::invalid_argument("fit_fspl_baseline: no usable (Connected) samples");
  }

  const auto [lo_it, hi_it] = std::minmax_element(r.begin(), r.end());
  double lo = *lo_it, hi = *hi_it;
  // Golden-section over the bracket, then keep the better of the search
  // result and the plain median (guards rare non-unimodal landscapes).
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = median_abs_residual(r, c);
  double fd = median_abs_residual(r, d);
  for (int iter = 0; iter < 200 && (b - a) > 1e-9; ++iter) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = median_abs_residual(r, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = median_abs_residual(r, d);
    }
  }
  const double searched = 0.5 * (a + b);
  const double med = median_of(r);
  return median_abs_residual(r, med) < median_abs_residual(r, searched) ? med
                                                                        : searched;
}

GapReport detect_gaps(const DriveTrace& trace, double offset_db,
                      double drop_threshold_db, int min_run) {
  trace.validate();
  if (!std::isfinite(offset_db)) {
    throw std::invalid_argument("detect_gaps: offset must be finite");
  }
  if (!(drop_threshold_db > 0.0)) {
    throw std::invalid_argument("detect_gaps: drop threshold must be positive");
  }
  if (min_run < 1) {
    throw std::invalid_argument("detect_gaps: min_run must be >= 1");
  }

  const int n = static_cast<int>(trace.records.size());
  GapReport report;
  report.fitted_offset_db = offset_db;
  report.per_sample_residual.reserve(n);
  std::vector<char> qualifies(n, 0);
  for (int i = 0; i < n; ++i) {
    const KpiRecord& record = trace.records[i];
    const double d = distance(trace.gnb_pos, *record.position);
    const double expected = -fspl_db(d, trace.freq_hz) + offset_db;
    const double residual = expected - record.rsrp_dbm;
    report.per_sample_residual.push_back(residual);
    qualifies[i] = record.service == ServiceState::NoAccess ||
                   residual >= drop_threshold_db;
  }

  for (int i = 0; i < n;) {
    if (!qualifies[i]) {
      ++i;
      continue;
    }
    int j = i;
    while (j + 1 < n && qualifies[j + 1]) ++j;
    if (j - i + 1 >= min_run) report.gap_intervals.emplace_back(i, j);
    i = j + 1;
  }
  return report;
}

std::vector<SightClass> classify_los(const DriveTrace& trace,
                                     const std::vector<Box3>& obstacles) {
  trace.validate();
  for (const Box3& box : obstacles) {
    if (!well_formed(box)) {
      throw std::invalid_argument("classify_los: ill-formed obstacle box");
    }
  }
  std::vector<SightClass> out;
  out.reserve(trace.records.size());
  for (const KpiRecord& record : trace.records) {
    bool blocked = false;
    for (const Box3& box : obstacles) {
      if (segment_intersects_box(trace.gnb_pos, *record.position, box)) {
        blocked = true;
        break;
      }
    }
    out.push_back(blocked ? SightClass::NLoS : SightClass::LoS);
  }
  return out;
}

bool sample_in_gap(const GapReport& report, int sample_index) {
  for (const auto& [first, last] : report.gap_intervals) {
    if (sample_index >= first && sample_index <= last) return true;
  }
  return false;
}

std::string gap_report_to_csv(const GapReport& report) {
  std::string out = "sample_index,residual_db,in_gap\n";
  for (std::size_t i = 0; i < report.per_sample_residual.size(); ++i) {
    out += format("%zu,%.2f,%d\n", i, report.per_sample_residual[i],
                  sample_in_gap(report, static_cast<int>(i)) ? 1 : 0);
  }
  return out;
}

std::string gap_summary_line(const GapReport& report) {
  const std::size_t n = report.per_sample_residual.size();
  std::size_t in_gap = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (sample_in_gap(report, static_cast<int>(i))) ++in_gap;
  }
  const double fraction = n ? static_cast<double>(in_gap) / n : 0.0;
  return format("fitted_offset_db=%.2f gap_count=%zu gap_sample_fraction=%.3f",
                report.fitted_offset_db, report.gap_intervals.size(), fraction);
}

DriveTrace gps_trace_to_local(const DriveTrace& gps_trace) {
  gps_trace.validate();
  constexpr double kEarthRadiusM = 6378137.0;
  const double deg = kPi / 180.0;

  double lat0 = 0.0, lon0 = 0.0, alt0 = 0.0;
  for (const KpiRecord& record : gps_trace.records) {
    lat0 += record.position->x;
    lon0 += record.position->y;
    alt0 += record.position->z;
  }
  const double inv_n = 1.0 / gps_trace.records.size();
  lat0 *= inv_n;
  lon0 *= inv_n;
  alt0 *= inv_n;
  const double cos_lat0 = std::cos(lat0 * deg);

  const auto to_local = [&](const Vec3& lla) -> Vec3 {
    return {kEarthRadiusM * (lla.y - lon0) * deg * cos_lat0,
            kEarthRadiusM * (lla.x - lat0) * deg, lla.z - alt0};
  };

  DriveTrace local = gps_trace;
  for (KpiRecord& record : local.records) {
    record.position = to_local(*record.position);
  }
  local.gnb_pos = to_local(gps_trace.gnb_pos);
  return local;
}

}  // namespace risim
