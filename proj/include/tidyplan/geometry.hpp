#pragma once

#include <cmath>

namespace tidyplan {

// Absolute tolerance for geometric comparisons (meters). Containment is
// accepted up to this slack and overlaps must penetrate deeper than it, so
// footprints that exactly tile a surface do not flip on rounding noise.
inline constexpr double kGeomEps = 1e-9;

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend Vec3 operator-(const Vec3& a, const Vec3& b) {
    return {a.x - b.x, a.y - b.y, a.z - b.z};
  }
  friend Vec3 operator+(const Vec3& a, const Vec3& b) {
    return {a.x + b.x, a.y + b.y, a.z + b.z};
  }
  friend bool operator==(const Vec3& a, const Vec3& b) {
    return a.x == b.x && a.y == b.y && a.z == b.z;
  }

  double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

inline double distance(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

inline bool is_finite(const Vec3& v) {
  return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

// Interval overlap with positive penetration; touching intervals do not count.
inline bool spans_overlap(double min_a, double max_a, double min_b, double max_b) {
  return std::min(max_a, max_b) - std::max(min_a, min_b) > kGeomEps;
}

}  // namespace tidyplan
