#include "uavabs/geometry.hpp"

#include <algorithm>

namespace uavabs::geometry {

void UavPose::validate() const {
  require_finite(position.x, "position.x");
  require_finite(position.y, "position.y");
  require_finite(position.z, "position.z");
  require(position.z > 0.0, "UAV height must be > 0");
  require(std::isfinite(downtilt_deg) && downtilt_deg > 0.0 && downtilt_deg < 90.0,
          "UAV downtilt must be in (0, 90) deg");
  require_finite(heading_deg, "heading");
}

namespace {

void check_coverage_inputs(double h_m, double alpha_deg, double hpbw_e_deg) {
  require(std::isfinite(h_m) && h_m > 0.0, "height must be > 0");
  require(std::isfinite(alpha_deg) && alpha_deg > 0.0 && alpha_deg <= 90.0,
          "downtilt must be in (0, 90] deg");
  require(std::isfinite(hpbw_e_deg) && hpbw_e_deg > 0.0 && hpbw_e_deg < 180.0,
          "elevation beamwidth must be in (0, 180) deg");
  if (90.0 - alpha_deg + 0.5 * hpbw_e_deg >= 90.0)
    throw GeometryError("upper beam edge does not reach the ground: footprint is unbounded "
                        "(need downtilt > HPBW_E / 2)");
}

} // namespace

double coverage_span(double h_m, double alpha_deg, double hpbw_e_deg) {
  check_coverage_inputs(h_m, alpha_deg, hpbw_e_deg);
  const double far = std::tan(deg2rad(90.0 - alpha_deg + 0.5 * hpbw_e_deg));
  const double near = std::tan(deg2rad(90.0 - alpha_deg - 0.5 * hpbw_e_deg));
  return h_m * (far - near);
}

CoverageFootprint footprint(const UavPose &pose, double hpbw_e_deg) {
  pose.validate();
  const double h = pose.height_m();
  const double alpha = pose.downtilt_deg;
  check_coverage_inputs(h, alpha, hpbw_e_deg);
  CoverageFootprint fp;
  fp.near_m = std::max(0.0, h * std::tan(deg2rad(90.0 - alpha - 0.5 * hpbw_e_deg)));
  fp.boresight_m = h * std::tan(deg2rad(90.0 - alpha));
  fp.far_m = h * std::tan(deg2rad(90.0 - alpha + 0.5 * hpbw_e_deg));
  return fp;
}

double slant_distance(const UavPose &pose, Vec2 ue_ground) {
  const Vec3 d{pose.position.x - ue_ground.x, pose.position.y - ue_ground.y, pose.position.z};
  return d.norm();
}

namespace {

AntennaFrame make_frame(const Vec3 &origin, double yaw_deg, double downtilt_deg) {
  const double psi = deg2rad(yaw_deg);
  const double a = deg2rad(downtilt_deg);
  AntennaFrame f;
  f.origin = origin;
  f.x_axis = {std::cos(a) * std::cos(psi), std::cos(a) * std::sin(psi), -std::sin(a)};
  f.y_axis = {-std::sin(psi), std::cos(psi), 0.0};
  f.z_axis = {std::sin(a) * std::cos(psi), std::sin(a) * std::sin(psi), std::cos(a)};
  return f;
}

} // namespace

AntennaFrame uav_module_frame(const UavPose &pose, const MountFrame &mount) {
  const double h = deg2rad(pose.heading_deg);
  const Vec3 body{mount.offset.x * std::cos(h) - mount.offset.y * std::sin(h),
                  mount.offset.x * std::sin(h) + mount.offset.y * std::cos(h), mount.offset.z};
  return make_frame(pose.position + body, pose.heading_deg + mount.yaw_deg,
                    pose.downtilt_deg + mount.downtilt_deg);
}

AntennaFrame fixed_module_frame(const Vec3 &base, const MountFrame &mount) {
  return make_frame(base + mount.offset, mount.yaw_deg, mount.downtilt_deg);
}

array::SteeringCommand steering_toward(const AntennaFrame &frame, const Vec3 &target) {
  const Vec3 local = frame.to_local(target - frame.origin);
  const double r = local.norm();
  if (!(r > 0.0) || local.x <= 1e-12 * r)
    throw GeometryError("target is on or behind the array plane: not servable");
  return {rad2deg(std::atan2(local.y, local.x)), rad2deg(std::asin(std::clamp(local.z / r, -1.0, 1.0)))};
}

array::SteeringCommand required_steering(const UavPose &pose, const MountFrame &mount,
                                         Vec2 ue_ground) {
  pose.validate();
  return steering_toward(uav_module_frame(pose, mount), {ue_ground.x, ue_ground.y, 0.0});
}

double ray_miss_distance(const AntennaFrame &frame, const array::SteeringCommand &steer,
                         const Vec3 &target) {
  const Vec3 dir = frame.to_world(array::direction_from_angles(steer.azimuth_deg, steer.elevation_deg));
  const Vec3 v = target - frame.origin;
  const double t = v.dot(dir);
  return (v - dir * t).norm();
}

double intersection_angle_beta(const UavPose &uav, Vec2 ue_a, Vec2 ue_b) {
  const Vec2 a{ue_a.x - uav.position.x, ue_a.y - uav.position.y};
  const Vec2 b{ue_b.x - uav.position.x, ue_b.y - uav.position.y};
  const double na = std::hypot(a.x, a.y);
  const double nb = std::hypot(b.x, b.y);
  if (na < 1e-9 || nb < 1e-9)
    throw GeometryError("UE at UAV nadir: beam ground projection has no direction");
  const double cross = a.x * b.y - a.y * b.x;
  const double dot = a.x * b.x + a.y * b.y;
  return rad2deg(std::atan2(std::abs(cross), dot));
}

MuLayout mu_layout(const UavPose &uav, double d0_m, double d1_m, double d2_m) {
  require(d0_m >= 0.0 && d1_m >= 0.0 && d2_m >= 0.0, "MU distances must be >= 0");
  const double h = deg2rad(uav.heading_deg);
  const Vec2 fwd{std::cos(h), std::sin(h)};
  const Vec2 left{-std::sin(h), std::cos(h)};
  const Vec2 p{uav.position.x, uav.position.y};
  MuLayout l;
  l.ue_a = {p.x + d0_m * fwd.x - 0.5 * d1_m * left.x, p.y + d0_m * fwd.y - 0.5 * d1_m * left.y};
  l.ue_b = {p.x + (d0_m - d2_m) * fwd.x + 0.5 * d1_m * left.x,
            p.y + (d0_m - d2_m) * fwd.y + 0.5 * d1_m * left.y};
  return l;
}

MuGeometry mu_geometry(const UavPose &uav, double d0_m, double d1_m, double d2_m) {
  const MuLayout l = mu_layout(uav, d0_m, d1_m, d2_m);
  return {d0_m, d1_m, d2_m, intersection_angle_beta(uav, l.ue_a, l.ue_b)};
}

} // namespace uavabs::geometry
