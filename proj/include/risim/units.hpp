#pragma once

#include <cmath>

namespace risim {

inline constexpr double kSpeedOfLightMps = 299792458.0;
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Smallest power accepted by the floored dB conversion used at logging
// boundaries. Linear-domain computations never rely on this floor.
inline constexpr double kPowerFloorW = 1e-40;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

inline double dbm_to_w(double dbm) { return db_to_linear(dbm - 30.0); }
inline double w_to_dbm(double w) { return linear_to_db(w) + 30.0; }
inline double w_to_dbm_floored(double w) {
  return w_to_dbm(w < kPowerFloorW ? kPowerFloorW : w);
}

/// Wraps an angle to [0, 2*pi).
inline double wrap_two_pi(double rad) {
  double r = std::fmod(rad, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  return r;
}

/// Shortest angular distance between two angles, in [0, pi].
inline double angular_distance(double a, double b) {
  const double d = std::fabs(wrap_two_pi(a) - wrap_two_pi(b));
  return d > kPi ? kTwoPi - d : d;
}

}  // namespace risim
