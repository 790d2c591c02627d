#pragma once

// Time-stepped simulation of a UAV-ABS emergency dispatch mission:
// dispatch -> search -> approach -> serve/adjust -> return -> land.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "uavabs/multibeam.hpp"

namespace uavabs::dispatch {

enum class DispatchState { Standby, EnRoute, Searching, Approaching, Serving, Adjusting, Returning, Landed };

std::string_view to_string(DispatchState s);
std::span<const std::pair<DispatchState, DispatchState>> transition_edges();
bool transition_allowed(DispatchState from, DispatchState to);

struct OutageReport {
  Vec2 area_center;
  double area_radius_m = 50.0;
};
struct GuDetected {
  std::string ue_id;
  Vec2 position;
};
struct CsiDegraded {
  std::string link_id;
  double db = 0.0;
};
struct BatteryLow {};
struct ServiceRestored {};
struct WindGust {
  double speed_mps = 0.0;
};

using EventKind =
    std::variant<OutageReport, GuDetected, CsiDegraded, BatteryLow, ServiceRestored, WindGust>;

struct MissionEvent {
  double t = 0.0;
  EventKind kind;
};

// Compact single-token rendering, e.g. "GuDetected(ue1;22.000;0.000)".
std::string format_event(const MissionEvent &e);

// Point-source level model L(d) = L1 - spreading * log10(d) - excess * (d - 1).
struct AcousticModel {
  double level_at_1m_db = 88.0;
  double spreading_db_per_decade = 20.0;
  double excess_db_per_m = 2.0 / 9.0;

  void validate() const;
  // Keeps the spreading term and solves excess from two (distance, level)
  // measurements, the first at 1 m.
  static AcousticModel fit_two_point(double level_at_1m_db, double d2_m, double level_d2_db,
                                     double spreading_db_per_decade = 20.0);
};

double acoustic_level(const AcousticModel &model, double d_m);
// Smallest distance whose level is at or below threshold_db (bisection to
// 1 mm). Returns 1 m when the threshold is already met at the reference.
double min_standoff(const AcousticModel &model, double threshold_db);

struct MissionConfig {
  Vec3 base{0.0, 0.0, 0.0};
  double cruise_altitude_m = 35.0;
  double serve_height_m = 35.0;
  double standoff_d0_m = 22.0;
  double cruise_speed_mps = 10.0;
  double max_speed_mps = 15.0;
  double sensing_radius_m = 100.0;
  double realign_latency_s = 0.010;
  double battery_low_fraction = 0.15;
  double battery_reserve_fraction = 0.05;
  double return_energy_margin = 1.2;
  double cruise_drain_per_s = 1.0 / 1200.0;
  double hover_drain_per_s = 1.0 / 1500.0;
  double drift_sigma_m_per_sqrt_s = 0.5;
  double altitude_sigma_m_per_sqrt_s = 0.1;
  double drift_box_m = 2.0;
  double altitude_box_m = 0.5;
  double wind_reference_mps = 6.5; // this wind speed doubles the drift sigma
  double acoustic_threshold_db = 85.0;
  AcousticModel acoustic{};
  double csi_degraded_db = 3.0;
  double arrival_tolerance_m = 0.5;
  double dt_s = 0.1;

  void validate() const;
};

struct UavStatus {
  geometry::UavPose pose{};
  Vec3 velocity_mps{};
  double battery_fraction = 1.0;
  DispatchState state = DispatchState::Standby;
  channel::Rng rng{};
  double time_s = 0.0;

  // Mission bookkeeping.
  Vec2 area_center{};
  double area_radius_m = 0.0;
  double search_phase_rad = 0.0;
  std::string target_ue;
  Vec2 target_ue_pos{};
  Vec3 hover_setpoint{};
  double approach_offset_m = 0.0;
  std::size_t serve_mount = 0;
  array::SteeringCommand serve_steer{};
  double adjust_elapsed_s = 0.0;
  double wind_mps = 0.0;
};

UavStatus initial_status(const MissionConfig &config, std::uint64_t seed);

struct StepResult {
  UavStatus status;
  std::vector<MissionEvent> emitted;  // self-generated events
  std::vector<MissionEvent> accepted; // input events that were applied
  std::vector<std::string> diagnostics;
};

struct DriftParams {
  double sigma_m_per_sqrt_s = 0.5;
  double altitude_sigma_m_per_sqrt_s = 0.1;
  double box_m = 2.0;
  double altitude_box_m = 0.5;
};

// One random-walk step of the hover drift around status.hover_setpoint,
// folded back into a disc of radius box_m (and +-altitude_box_m vertically).
geometry::UavPose hover_drift(const UavStatus &status, const DriftParams &params, double dt,
                              channel::Rng &rng);

// Steps a mission over one scene. Holds the per-mount arrays so repeated
// steps do not recompute pattern normalizations.
class MissionSimulator {
public:
  MissionSimulator(multibeam::Scene scene, MissionConfig config);

  StepResult step(const UavStatus &status, std::span<const MissionEvent> events, double dt) const;

  // Best isolated SNR over all module pairs for a UAV pose and ground point,
  // or nullopt when no pair can see each other.
  struct LinkCheck {
    double snr_db;
    std::size_t uav_mount;
    array::SteeringCommand steer;
  };
  std::optional<LinkCheck> best_link(const geometry::UavPose &pose, const std::string &ue_id,
                                     Vec2 ue_pos) const;

  const multibeam::Scene &scene() const { return model_.scene(); }
  const MissionConfig &config() const { return config_; }
  double standoff_m() const { return standoff_m_; }

private:
  double energy_to_base(const UavStatus &s) const;

  multibeam::SceneModel model_;
  MissionConfig config_;
  double standoff_m_;
};

StepResult step(const UavStatus &status, std::span<const MissionEvent> events, double dt,
                const multibeam::Scene &scene, const MissionConfig &config = {});

struct LogRecord {
  double t;
  DispatchState state;
  Vec3 position;
  double battery;
  std::string events;
};

struct MissionLog {
  std::vector<LogRecord> records;
  std::vector<std::string> diagnostics;
  UavStatus final_status;
};

// Runs until Landed or max_time_s. Scripted events are delivered to the step
// whose interval (t, t + dt] contains their timestamp.
MissionLog run_mission(const multibeam::Scene &scene, const MissionConfig &config,
                       std::vector<MissionEvent> script, std::uint64_t seed, double max_time_s);

// Line-delimited "t,state,x,y,z,battery,event" with a header line.
std::string format_log(const MissionLog &log);

} // namespace uavabs::dispatch
