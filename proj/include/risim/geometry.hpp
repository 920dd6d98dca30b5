#pragma once

#include <cmath>
#include <stdexcept>

namespace risim {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(const Vec3& a, double s) { return {a.x * s, a.y * s, a.z * s}; }
inline Vec3 operator*(double s, const Vec3& a) { return a * s; }
inline bool operator==(const Vec3& a, const Vec3& b) {
  return a.x == b.x && a.y == b.y && a.z == b.z;
}

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline double distance(const Vec3& a, const Vec3& b) { return norm(a - b); }

inline bool finite(const Vec3& a) {
  return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z);
}

inline Vec3 normalized(const Vec3& a) {
  const double n = norm(a);
  if (n <= 0.0 || !std::isfinite(n)) throw std::invalid_argument("cannot normalize zero vector");
  return a * (1.0 / n);
}

/// Axis-aligned box given by two opposite corners with lo <= hi per axis.
struct Box3 {
  Vec3 lo;
  Vec3 hi;
};

inline bool well_formed(const Box3& b) {
  return finite(b.lo) && finite(b.hi) && b.lo.x <= b.hi.x && b.lo.y <= b.hi.y && b.lo.z <= b.hi.z;
}

/// True when the closed segment a-b touches the box (slab test on t in [0,1]).
/// Endpoints inside the box count as intersection.
inline bool segment_intersects_box(const Vec3& a, const Vec3& b, const Box3& box) {
  double t0 = 0.0;
  double t1 = 1.0;
  const double av[3] = {a.x, a.y, a.z};
  const double bv[3] = {b.x, b.y, b.z};
  const double lo[3] = {box.lo.x, box.lo.y, box.lo.z};
  const double hi[3] = {box.hi.x, box.hi.y, box.hi.z};
  for (int i = 0; i < 3; ++i) {
    const double d = bv[i] - av[i];
    if (d == 0.0) {
      if (av[i] < lo[i] || av[i] > hi[i]) return false;
      continue;
    }
    double ta = (lo[i] - av[i]) / d;
    double tb = (hi[i] - av[i]) / d;
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) return false;
  }
  return true;
}

}  // namespace risim
