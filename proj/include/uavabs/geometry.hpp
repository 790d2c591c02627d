#pragma once

// Coverage and pointing geometry over a flat ground plane (z = 0).
// World frame: x/y on the ground, z up. Yaw is measured from +x toward +y.

#include "uavabs/array_engine.hpp"
#include "uavabs/common.hpp"

namespace uavabs::geometry {

struct UavPose {
  Vec3 position{0.0, 0.0, 10.0}; // z is the height h
  double heading_deg = 0.0;
  double downtilt_deg = 50.0; // common module downtilt alpha

  double height_m() const { return position.z; }
  void validate() const;
};

// Orientation and airframe offset of one beamforming module. For modules on
// the UAV the offset is in the body frame and rotates with the heading; for
// ground terminals it is a plain world-frame offset. A negative downtilt
// points the module above the horizon.
struct MountFrame {
  Vec3 offset{};
  double yaw_deg = 0.0;
  double downtilt_deg = 0.0;
};

struct CoverageFootprint {
  double near_m = 0.0;      // L1
  double boresight_m = 0.0; // L2
  double far_m = 0.0;       // L3

  double span_m() const { return far_m - near_m; }
};

struct MuGeometry {
  double d0_m = 0.0;
  double d1_m = 0.0;
  double d2_m = 0.0;
  double beta_deg = 0.0;
};

// Horizontal ground coverage L3 - L1 of a beam with elevation beamwidth
// hpbw_e_deg tilted alpha_deg below the horizon from height h_m.
// Throws GeometryError when the far beam edge does not reach the ground.
double coverage_span(double h_m, double alpha_deg, double hpbw_e_deg);

// L1/L2/L3 ground distances along the boresight azimuth. L1 clamps to 0 once
// the lower beam edge passes nadir.
CoverageFootprint footprint(const UavPose &pose, double hpbw_e_deg);

double slant_distance(const UavPose &pose, Vec2 ue_ground);

// Orthonormal antenna frame of a module: x = boresight, y = azimuth row
// axis (horizontal), z = elevation column axis.
struct AntennaFrame {
  Vec3 origin;
  Vec3 x_axis;
  Vec3 y_axis;
  Vec3 z_axis;

  Vec3 to_local(const Vec3 &world_dir) const {
    return {world_dir.dot(x_axis), world_dir.dot(y_axis), world_dir.dot(z_axis)};
  }
  Vec3 to_world(const Vec3 &local_dir) const {
    return x_axis * local_dir.x + y_axis * local_dir.y + z_axis * local_dir.z;
  }
};

// Frame of a module mounted on the UAV airframe.
AntennaFrame uav_module_frame(const UavPose &pose, const MountFrame &mount);
// Frame of a module at a fixed world position (ground terminal).
AntennaFrame fixed_module_frame(const Vec3 &base, const MountFrame &mount);

// Steering angles in a module frame that point the beam at a world target.
// Throws GeometryError when the target is on or behind the array plane.
array::SteeringCommand steering_toward(const AntennaFrame &frame, const Vec3 &target);

array::SteeringCommand required_steering(const UavPose &pose, const MountFrame &mount,
                                         Vec2 ue_ground);

// Closest approach (m) of the steered boresight ray to the target.
double ray_miss_distance(const AntennaFrame &frame, const array::SteeringCommand &steer,
                         const Vec3 &target);

// Angle between the ground projections of the beams toward two UEs.
double intersection_angle_beta(const UavPose &uav, Vec2 ue_a, Vec2 ue_b);

// Two-UE layout of the multi-user trials: UE a at (d0, -d1/2) and UE b at
// (d0 - d2, +d1/2) relative to the UAV ground projection, stand-off axis +x.
struct MuLayout {
  Vec2 ue_a;
  Vec2 ue_b;
};
MuLayout mu_layout(const UavPose &uav, double d0_m, double d1_m, double d2_m);
MuGeometry mu_geometry(const UavPose &uav, double d0_m, double d1_m, double d2_m);

} // namespace uavabs::geometry
