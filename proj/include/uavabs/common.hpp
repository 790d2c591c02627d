#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace uavabs {

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kPi = std::numbers::pi;

// Input that violates a documented precondition or type invariant.
class InvalidArgument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// A well-formed request that has no physical answer (target behind an
// array plane, beam edge parallel to the ground, ...).
class GeometryError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

inline double wavelength_m(double carrier_hz) { return kSpeedOfLight / carrier_hz; }

inline void require(bool cond, const std::string &what) {
  if (!cond) throw InvalidArgument(what);
}

inline void require_finite(double v, const char *name) {
  if (!std::isfinite(v)) throw InvalidArgument(std::string(name) + " must be finite");
}

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Vec3 operator+(const Vec3 &o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3 &o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  double dot(const Vec3 &o) const { return x * o.x + y * o.y + z * o.z; }
  double norm() const { return std::sqrt(dot(*this)); }
  Vec3 unit() const {
    const double n = norm();
    return {x / n, y / n, z / n};
  }
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

} // namespace uavabs
