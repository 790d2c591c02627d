#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "uavabs/geometry.hpp"

using namespace uavabs;
using namespace uavabs::geometry;

namespace {

// Ground distance where a ray leaving height h with depression angle dep
// (degrees below the horizon) meets z = 0, stepping the ray explicitly in 3-D.
double ray_ground(double h, double dep_deg, double heading_deg) {
  const double c = std::cos(deg2rad(dep_deg));
  const Vec3 dir{c * std::cos(deg2rad(heading_deg)), c * std::sin(deg2rad(heading_deg)),
                 -std::sin(deg2rad(dep_deg))};
  const double t = h / -dir.z;
  const Vec3 hit = Vec3{0, 0, h} + dir * t;
  return std::hypot(hit.x, hit.y);
}

UavPose pose_at(double h, double alpha, double heading = 0.0) {
  UavPose p;
  p.position = {0.0, 0.0, h};
  p.downtilt_deg = alpha;
  p.heading_deg = heading;
  return p;
}

} // namespace

TEST_CASE("coverage span at 10 m, 50 deg, 60 deg beam") {
  CHECK(coverage_span(10.0, 50.0, 60.0) == doctest::Approx(25.71).epsilon(0.05 / 25.71));
  const double oracle = 10.0 * (std::tan(deg2rad(70.0)) - std::tan(deg2rad(10.0)));
  CHECK(coverage_span(10.0, 50.0, 60.0) == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("coverage span grows linearly with height") {
  const double base = coverage_span(10.0, 57.84, 60.0);
  for (double h : {5.0, 20.0, 35.0, 80.0})
    CHECK(coverage_span(h, 57.84, 60.0) == doctest::Approx(base * h / 10.0).epsilon(1e-12));
}

TEST_CASE("footprint edges agree with 3-D ray intersection") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> h(2.0, 120.0), a(32.0, 59.0), e(10.0, 60.0),
      hd(-180.0, 180.0);
  for (int i = 0; i < 200; ++i) {
    const double hpbw = e(rng);
    const auto p = pose_at(h(rng), std::max(a(rng), hpbw / 2 + 1.0), hd(rng));
    const auto fp = footprint(p, hpbw);
    const double h0 = p.position.z, al = p.downtilt_deg;
    if (al + hpbw / 2 < 90.0) {
      CHECK(fp.near_m == doctest::Approx(ray_ground(h0, al + hpbw / 2, p.heading_deg)).epsilon(1e-9));
      CHECK(fp.span_m() == doctest::Approx(coverage_span(h0, al, hpbw)).epsilon(1e-9));
    }
    CHECK(fp.boresight_m == doctest::Approx(ray_ground(h0, al, p.heading_deg)).epsilon(1e-9));
    CHECK(fp.far_m == doctest::Approx(ray_ground(h0, al - hpbw / 2, p.heading_deg)).epsilon(1e-9));
  }
}

TEST_CASE("near edge clamps at nadir") {
  const auto fp = footprint(pose_at(10.0, 80.0), 60.0);
  CHECK(fp.near_m == 0.0);
  CHECK(fp.far_m > fp.boresight_m);
}

TEST_CASE("unbounded footprints are rejected") {
  CHECK_THROWS_AS(coverage_span(10.0, 30.0, 60.0), GeometryError);
  CHECK_THROWS_AS(coverage_span(10.0, 20.0, 60.0), GeometryError);
  CHECK_THROWS_AS(coverage_span(-1.0, 50.0, 60.0), InvalidArgument);
  CHECK_THROWS_AS(footprint(pose_at(0.0, 50.0), 60.0), InvalidArgument);
}

TEST_CASE("field-trial slant distance") {
  CHECK(slant_distance(pose_at(35.0, 57.84), {22.0, 0.0}) == doctest::Approx(41.34).epsilon(0.01 / 41.34));
  CHECK(rad2deg(std::atan2(35.0, 22.0)) == doctest::Approx(57.84).epsilon(1e-3));
}

TEST_CASE("module frames are orthonormal and right-handed") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> ang(-180, 180), tilt(1, 89);
  for (int i = 0; i < 100; ++i) {
    auto p = pose_at(30.0, tilt(rng), ang(rng));
    MountFrame m{{0.1, -0.2, 0.0}, ang(rng), tilt(rng) - 45.0};
    const auto f = uav_module_frame(p, m);
    CHECK(f.x_axis.norm() == doctest::Approx(1.0));
    CHECK(f.y_axis.norm() == doctest::Approx(1.0));
    CHECK(f.x_axis.dot(f.y_axis) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(f.x_axis.dot(f.z_axis) == doctest::Approx(0.0).epsilon(1e-12));
    const Vec3 cross{f.x_axis.y * f.y_axis.z - f.x_axis.z * f.y_axis.y,
                     f.x_axis.z * f.y_axis.x - f.x_axis.x * f.y_axis.z,
                     f.x_axis.x * f.y_axis.y - f.x_axis.y * f.y_axis.x};
    CHECK((cross - f.z_axis).norm() < 1e-12);
    CHECK(f.y_axis.z == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("boresight of a UAV module hits the footprint center") {
  const auto p = pose_at(35.0, 57.84, 30.0);
  const auto f = uav_module_frame(p, {});
  const double t = 35.0 / -f.x_axis.z;
  const Vec3 hit = f.origin + f.x_axis * t;
  CHECK(std::hypot(hit.x, hit.y) == doctest::Approx(footprint(p, 60.0).boresight_m));
}

TEST_CASE("steering toward a target leaves no miss distance") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> x(5, 60), y(-30, 30);
  const auto p = pose_at(35.0, 57.84);
  for (int i = 0; i < 100; ++i) {
    const Vec2 ue{x(rng), y(rng)};
    const auto f = uav_module_frame(p, {});
    const Vec3 target{ue.x, ue.y, 0.0};
    const auto s = required_steering(p, {}, ue);
    CHECK(ray_miss_distance(f, s, target) < 1e-9);
  }
  CHECK_THROWS_AS(steering_toward(uav_module_frame(p, {}), {-50.0, 0.0, 80.0}), GeometryError);
}

TEST_CASE("intersection angle of the two-user layouts") {
  const auto p = pose_at(35.0, 57.84);
  const auto g1 = mu_geometry(p, 22.0, 6.0, 0.0);
  const double oracle = 2.0 * rad2deg(std::atan2(3.0, 22.0));
  CHECK(g1.beta_deg == doctest::Approx(oracle).epsilon(1e-9));
  const auto g2 = mu_geometry(p, 22.0, 6.0, 10.0);
  CHECK(g2.beta_deg ==
        doctest::Approx(rad2deg(std::atan2(3.0, 22.0) + std::atan2(3.0, 12.0))).epsilon(1e-9));
  CHECK(g2.beta_deg > g1.beta_deg);
  const auto lay = mu_layout(p, 22.0, 6.0, 10.0);
  CHECK(lay.ue_b.x == doctest::Approx(12.0));
  CHECK(lay.ue_b.y == doctest::Approx(3.0));
  CHECK_THROWS_AS(intersection_angle_beta(p, {0.0, 0.0}, {5.0, 0.0}), GeometryError);
}

TEST_CASE("pose validation") {
  CHECK_THROWS_AS(pose_at(10.0, 0.0).validate(), InvalidArgument);
  CHECK_THROWS_AS(pose_at(10.0, 90.0).validate(), InvalidArgument);
  CHECK_NOTHROW(pose_at(10.0, 45.0).validate());
}
