#pragma once

#include <string>
#include <utility>
#include <vector>

#include "risim/geometry.hpp"
#include "risim/kpi.hpp"

namespace risim {

/// One drive-test log: ordered samples plus the serving-site position and
/// carrier. Positions are local Cartesian meters; GPS logs are converted
/// with gps_trace_to_local() before analysis.
struct DriveTrace {
  std::vector<KpiRecord> records;
  Vec3 gnb_pos;
  double freq_hz = 3.5e9;

  /// Throws std::invalid_argument when empty, when timestamps are not
  /// strictly increasing, or when any record lacks a position.
  void validate() const;
};

/// Fits the amplitude offset of the free-space prediction
/// rsrp_expected(i) = −fspl(d_i) + offset, picking the offset that minimizes
/// the median absolute residual so blockage dips cannot drag the baseline.
/// Only Connected samples enter the fit; throws when none exist.
double fit_fspl_baseline(const DriveTrace& trace);

/// Gap analysis result. Intervals are inclusive [first, last] sample-index
/// pairs, non-overlapping and in order.
struct GapReport {
  std::vector<std::pair<int, int>> gap_intervals;
  std::vector<double> per_sample_residual;  // one per sample, dB below baseline
  double fitted_offset_db = 0.0;
};

/// Flags maximal runs of at least `min_run` consecutive samples sitting
/// `drop_threshold_db` or more below the fitted baseline. NoAccess samples
/// qualify unconditionally. Throws on non-positive threshold or min_run, or
/// a non-finite offset.
GapReport detect_gaps(const DriveTrace& trace, double offset_db,
                      double drop_threshold_db, int min_run);

enum class SightClass { LoS, NLoS };

/// Per-sample sight classification: NLoS iff the gnb→sample segment
/// intersects any obstacle box (exact slab test, boundary touches count).
std::vector<SightClass> classify_los(const DriveTrace& trace,
                                     const std::vector<Box3>& obstacles);

bool sample_in_gap(const GapReport& report, int sample_index);

/// CSV table: sample_index,residual_db,in_gap.
std::string gap_report_to_csv(const GapReport& report);

/// One-line human summary: fitted offset, gap count, gap sample fraction.
std::string gap_summary_line(const GapReport& report);

/// Converts WGS-84 (lat deg, lon deg, alt m) records and gnb position to a
/// local tangent plane centered on the sample centroid: x east, y north,
/// z up, in meters.
DriveTrace gps_trace_to_local(const DriveTrace& gps_trace);

}  // namespace risim
