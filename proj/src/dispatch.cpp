#include "uavabs/dispatch.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace uavabs::dispatch {

namespace {

template <class... Ts> struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

using S = DispatchState;

constexpr std::array<std::pair<S, S>, 12> kEdges{{
    {S::Standby, S::EnRoute},
    {S::EnRoute, S::Searching},
    {S::EnRoute, S::Returning},
    {S::Searching, S::Approaching},
    {S::Searching, S::Returning},
    {S::Approaching, S::Serving},
    {S::Approaching, S::Returning},
    {S::Serving, S::Adjusting},
    {S::Serving, S::Returning},
    {S::Adjusting, S::Serving},
    {S::Adjusting, S::Returning},
    {S::Returning, S::Landed},
}};

bool airborne_on_mission(S s) {
  return s == S::EnRoute || s == S::Searching || s == S::Approaching || s == S::Serving ||
         s == S::Adjusting;
}

std::string fmt(double v, int prec = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

double horizontal_distance(const Vec3 &a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

// Folds t into [-r, r] by mirror reflection at the bounds.
double fold(double t, double r) {
  if (r <= 0.0) return 0.0;
  const double period = 4.0 * r;
  double m = std::fmod(t + r, period);
  if (m < 0.0) m += period;
  return m <= 2.0 * r ? m - r : 3.0 * r - m;
}

} // namespace

std::string_view to_string(DispatchState s) {
  switch (s) {
  case S::Standby: return "Standby";
  case S::EnRoute: return "EnRoute";
  case S::Searching: return "Searching";
  case S::Approaching: return "Approaching";
  case S::Serving: return "Serving";
  case S::Adjusting: return "Adjusting";
  case S::Returning: return "Returning";
  case S::Landed: return "Landed";
  }
  return "?";
}

std::span<const std::pair<DispatchState, DispatchState>> transition_edges() { return kEdges; }

bool transition_allowed(DispatchState from, DispatchState to) {
  return std::find(kEdges.begin(), kEdges.end(), std::pair{from, to}) != kEdges.end();
}

std::string format_event(const MissionEvent &e) {
  return std::visit(
      overloaded{
          [](const OutageReport &o) {
            return "OutageReport(" + fmt(o.area_center.x) + ";" + fmt(o.area_center.y) + ";" +
                   fmt(o.area_radius_m) + ")";
          },
          [](const GuDetected &g) {
            return "GuDetected(" + g.ue_id + ";" + fmt(g.position.x) + ";" + fmt(g.position.y) + ")";
          },
          [](const CsiDegraded &c) { return "CsiDegraded(" + c.link_id + ";" + fmt(c.db) + ")"; },
          [](const BatteryLow &) { return std::string("BatteryLow"); },
          [](const ServiceRestored &) { return std::string("ServiceRestored"); },
          [](const WindGust &w) { return "WindGust(" + fmt(w.speed_mps) + ")"; },
      },
      e.kind);
}

void AcousticModel::validate() const {
  require(std::isfinite(level_at_1m_db), "acoustic source level must be finite");
  require(std::isfinite(spreading_db_per_decade) && spreading_db_per_decade > 0.0,
          "acoustic spreading must be > 0 dB/decade");
  require(std::isfinite(excess_db_per_m) && excess_db_per_m >= 0.0,
          "acoustic excess attenuation must be >= 0");
}

AcousticModel AcousticModel::fit_two_point(double level_at_1m_db, double d2_m, double level_d2_db,
                                           double spreading_db_per_decade) {
  require(d2_m > 1.0, "second acoustic point must be beyond 1 m");
  AcousticModel m;
  m.level_at_1m_db = level_at_1m_db;
  m.spreading_db_per_decade = spreading_db_per_decade;
  m.excess_db_per_m =
      (level_at_1m_db - spreading_db_per_decade * std::log10(d2_m) - level_d2_db) / (d2_m - 1.0);
  m.validate();
  return m;
}

double acoustic_level(const AcousticModel &model, double d_m) {
  model.validate();
  require(std::isfinite(d_m) && d_m >= 1.0, "acoustic distance must be >= 1 m");
  return model.level_at_1m_db - model.spreading_db_per_decade * std::log10(d_m) -
         model.excess_db_per_m * (d_m - 1.0);
}

double min_standoff(const AcousticModel &model, double threshold_db) {
  model.validate();
  require_finite(threshold_db, "acoustic threshold");
  if (threshold_db >= model.level_at_1m_db) return 1.0;
  double lo = 1.0;
  double hi = 2.0;
  while (acoustic_level(model, hi) > threshold_db) {
    lo = hi;
    hi *= 2.0;
    require(hi < 1e9, "acoustic threshold unreachable");
  }
  while (hi - lo > 1e-3) {
    const double mid = 0.5 * (lo + hi);
    (acoustic_level(model, mid) > threshold_db ? lo : hi) = mid;
  }
  return hi;
}

void MissionConfig::validate() const {
  require(cruise_altitude_m > 0.0 && serve_height_m > 0.0, "altitudes must be > 0");
  require(standoff_d0_m >= 0.0, "stand-off distance must be >= 0");
  require(cruise_speed_mps > 0.0 && cruise_speed_mps <= max_speed_mps,
          "cruise speed must be in (0, max speed]");
  require(sensing_radius_m > 0.0, "sensing radius must be > 0");
  require(realign_latency_s >= 0.0, "re-alignment latency must be >= 0");
  require(battery_reserve_fraction >= 0.0 && battery_reserve_fraction < battery_low_fraction &&
              battery_low_fraction < 1.0,
          "need 0 <= reserve < low-battery threshold < 1");
  require(return_energy_margin >= 1.0, "return energy margin must be >= 1");
  require(cruise_drain_per_s >= 0.0 && hover_drain_per_s >= 0.0, "drain rates must be >= 0");
  require(drift_sigma_m_per_sqrt_s >= 0.0 && altitude_sigma_m_per_sqrt_s >= 0.0,
          "drift sigmas must be >= 0");
  require(drift_box_m >= 0.0 && altitude_box_m >= 0.0, "drift bounds must be >= 0");
  require(wind_reference_mps > 0.0, "wind reference speed must be > 0");
  require(csi_degraded_db > 0.0, "CSI degradation threshold must be > 0");
  require(arrival_tolerance_m > 0.0, "arrival tolerance must be > 0");
  require(dt_s > 0.0 && dt_s <= 1.0, "time step must be in (0, 1] s");
  acoustic.validate();
}

UavStatus initial_status(const MissionConfig &config, std::uint64_t seed) {
  UavStatus s;
  s.pose.position = config.base;
  s.rng.seed(seed);
  return s;
}

geometry::UavPose hover_drift(const UavStatus &status, const DriftParams &params, double dt,
                              channel::Rng &rng) {
  require(status.state == S::Serving || status.state == S::Adjusting,
          "hover drift applies only while Serving or Adjusting");
  require(dt > 0.0, "time step must be > 0");
  std::normal_distribution<double> n01(0.0, 1.0);
  const double sh = params.sigma_m_per_sqrt_s * std::sqrt(dt);
  const double sv = params.altitude_sigma_m_per_sqrt_s * std::sqrt(dt);
  const double gx = n01(rng);
  const double gy = n01(rng);
  const double gz = n01(rng);

  geometry::UavPose pose = status.pose;
  const Vec3 &c = status.hover_setpoint;
  double ox = pose.position.x - c.x + sh * gx;
  double oy = pose.position.y - c.y + sh * gy;
  const double r = std::hypot(ox, oy);
  if (r > params.box_m && r > 0.0) {
    const double folded = fold(r, params.box_m);
    ox *= folded / r;
    oy *= folded / r;
  }
  pose.position.x = c.x + ox;
  pose.position.y = c.y + oy;
  pose.position.z = c.z + fold(pose.position.z - c.z + sv * gz, params.altitude_box_m);
  return pose;
}

MissionSimulator::MissionSimulator(multibeam::Scene scene, MissionConfig config)
    : model_(std::move(scene)), config_(config) {
  config_.validate();
  require(!model_.scene().uav_mounts.empty(), "mission scene needs at least one UAV module");
  standoff_m_ = min_standoff(config_.acoustic, config_.acoustic_threshold_db);
}

std::optional<MissionSimulator::LinkCheck>
MissionSimulator::best_link(const geometry::UavPose &pose, const std::string &ue_id,
                            Vec2 ue_pos) const {
  const auto &scene = model_.scene();
  const auto it = std::find_if(scene.ues.begin(), scene.ues.end(),
                               [&](const auto &u) { return u.id == ue_id; });
  if (it == scene.ues.end()) return std::nullopt;
  const auto ue_idx = static_cast<std::size_t>(it - scene.ues.begin());

  int ch = 1;
  for (int c : scene.access_channels)
    if (!scene.backhaul_channel || *scene.backhaul_channel != c) {
      ch = c;
      break;
    }
  const auto wch = channel::WigigChannel::from_index(ch, scene.occupied_bw_hz);
  auto params = scene.channel_params;
  params.shadow_sigma_db = 0.0;

  std::optional<LinkCheck> best;
  for (std::size_t a = 0; a < scene.uav_mounts.size(); ++a) {
    const auto fa = geometry::uav_module_frame(pose, scene.uav_mounts[a].mount);
    for (std::size_t b = 0; b < it->mounts.size(); ++b) {
      const auto fb = geometry::fixed_module_frame({ue_pos.x, ue_pos.y, 0.0}, it->mounts[b].mount);
      const double d = (fa.origin - fb.origin).norm();
      if (d < 1.0) continue;
      array::SteeringCommand sa, sb;
      try {
        sa = geometry::steering_toward(fa, fb.origin);
        sb = geometry::steering_toward(fb, fa.origin);
      } catch (const GeometryError &) {
        continue;
      }
      const auto beam_a = model_.uav_array(a).steer(sa);
      const auto beam_b = model_.ue_array(ue_idx, b).steer(sb);
      channel::LinkBudget budget;
      budget.tx_power_dbm = scene.uav_mounts[a].tx_power_dbm;
      budget.tx_gain_dbi = beam_a.gain_dbi(sa.azimuth_deg, sa.elevation_deg);
      budget.rx_gain_dbi = beam_b.gain_dbi(sb.azimuth_deg, sb.elevation_deg);
      budget.noise_figure_db = it->mounts[b].noise_figure_db;
      budget.distance_m = d;
      budget.channel = wch;
      const double snr = channel::snr_db(budget, params);
      if (!best || snr > best->snr_db) best = LinkCheck{snr, a, sa};
    }
  }
  return best;
}

double MissionSimulator::energy_to_base(const UavStatus &s) const {
  const double d = (s.pose.position - config_.base).norm();
  return d / config_.cruise_speed_mps * config_.cruise_drain_per_s;
}

StepResult MissionSimulator::step(const UavStatus &status, std::span<const MissionEvent> events,
                                  double dt) const {
  require(std::isfinite(dt) && dt > 0.0 && dt <= 1.0, "time step must be in (0, 1] s");
  const auto &scene = model_.scene();
  const auto &cfg = config_;

  StepResult r{status, {}, {}, {}};
  UavStatus &s = r.status;
  const double t_end = s.time_s + dt;

  auto go = [&](S to) {
    if (!transition_allowed(s.state, to))
      throw std::logic_error("illegal dispatch transition " + std::string(to_string(s.state)) +
                             " -> " + std::string(to_string(to)));
    s.state = to;
  };
  auto reject = [&](const MissionEvent &e, const std::string &why) {
    r.diagnostics.push_back("t=" + fmt(t_end) + " rejected " + format_event(e) + " in " +
                            std::string(to_string(s.state)) + ": " + why);
  };
  auto find_ue = [&](const std::string &id) -> const multibeam::GroundUe * {
    for (const auto &u : scene.ues)
      if (u.id == id) return &u;
    return nullptr;
  };
  auto start_approach = [&](const GuDetected &g) {
    s.target_ue = g.ue_id;
    s.target_ue_pos = g.position;
    const double h = cfg.serve_height_m;
    const double r = standoff_m_ + 1e-6;
    const double min_horizontal = std::sqrt(std::max(0.0, r * r - h * h));
    s.approach_offset_m = std::max(cfg.standoff_d0_m, min_horizontal);
    go(S::Approaching);
  };
  auto setpoint = [&]() -> Vec3 {
    // Hover on the side the terminal's first module faces.
    Vec2 dir{s.pose.position.x - s.target_ue_pos.x, s.pose.position.y - s.target_ue_pos.y};
    const auto *ue = find_ue(s.target_ue);
    if (ue && !ue->mounts.empty()) {
      const double yaw = deg2rad(ue->mounts.front().mount.yaw_deg);
      dir = {std::cos(yaw), std::sin(yaw)};
    }
    const double n = std::hypot(dir.x, dir.y);
    if (n < 1e-9) dir = {1.0, 0.0};
    else dir = {dir.x / n, dir.y / n};
    return {s.target_ue_pos.x + s.approach_offset_m * dir.x,
            s.target_ue_pos.y + s.approach_offset_m * dir.y, cfg.serve_height_m};
  };

  // Input events.
  double last_t = -1e300;
  bool entered_adjusting = false;
  for (const auto &e : events) {
    if (e.t < last_t) {
      reject(e, "timestamp earlier than preceding event");
      continue;
    }
    last_t = e.t;
    const bool applied = std::visit(
        overloaded{
            [&](const OutageReport &o) {
              if (s.state != S::Standby) {
                reject(e, "UAV already dispatched");
                return false;
              }
              require(o.area_radius_m > 0.0, "outage area radius must be > 0");
              s.area_center = o.area_center;
              s.area_radius_m = o.area_radius_m;
              go(S::EnRoute);
              return true;
            },
            [&](const GuDetected &g) {
              if (s.state != S::Searching) {
                reject(e, s.state == S::Approaching || s.state == S::Serving ||
                                  s.state == S::Adjusting
                              ? "already engaged with a user"
                              : "no search in progress");
                return false;
              }
              if (!find_ue(g.ue_id)) {
                reject(e, "unknown ground user");
                return false;
              }
              start_approach(g);
              return true;
            },
            [&](const CsiDegraded &) {
              if (s.state != S::Serving) {
                reject(e, "no link in service");
                return false;
              }
              go(S::Adjusting);
              s.adjust_elapsed_s = 0.0;
              entered_adjusting = true;
              return true;
            },
            [&](const BatteryLow &) {
              if (!airborne_on_mission(s.state)) {
                reject(e, "not on a mission");
                return false;
              }
              go(S::Returning);
              return true;
            },
            [&](const ServiceRestored &) {
              if (!airborne_on_mission(s.state)) {
                reject(e, "not on a mission");
                return false;
              }
              go(S::Returning);
              return true;
            },
            [&](const WindGust &w) {
              require(w.speed_mps >= 0.0, "wind speed must be >= 0");
              s.wind_mps = w.speed_mps;
              return true;
            },
        },
        e.kind);
    if (applied) r.accepted.push_back(e);
  }

  const Vec3 start = s.pose.position;
  auto move_toward = [&](const Vec3 &target, double speed) {
    const Vec3 d = target - s.pose.position;
    const double dist = d.norm();
    const double reach = speed * dt;
    if (dist <= reach) {
      s.pose.position = target;
      return true;
    }
    s.pose.position = s.pose.position + d * (reach / dist);
    if (std::hypot(d.x, d.y) > 1e-9) s.pose.heading_deg = rad2deg(std::atan2(d.y, d.x));
    return false;
  };
  auto drift = [&]() {
    DriftParams p;
    p.sigma_m_per_sqrt_s = cfg.drift_sigma_m_per_sqrt_s * (1.0 + s.wind_mps / cfg.wind_reference_mps);
    p.altitude_sigma_m_per_sqrt_s = cfg.altitude_sigma_m_per_sqrt_s;
    p.box_m = cfg.drift_box_m;
    p.altitude_box_m = cfg.altitude_box_m;
    auto pose = hover_drift(s, p, dt, s.rng);
    const Vec3 d = pose.position - s.pose.position;
    const double limit = cfg.max_speed_mps * dt;
    if (d.norm() > limit) pose.position = s.pose.position + d * (limit / d.norm());
    // Drift never carries the UAV inside the acoustic stand-off sphere.
    const Vec3 ue{s.target_ue_pos.x, s.target_ue_pos.y, 0.0};
    const Vec3 rel = pose.position - ue;
    if (rel.norm() < standoff_m_ && rel.norm() > 0.0)
      pose.position = ue + rel * ((standoff_m_ + 1e-6) / rel.norm());
    s.pose = pose;
  };
  auto pointing_penalty = [&]() -> std::optional<double> {
    const auto &mount = scene.uav_mounts[s.serve_mount];
    const auto frame = geometry::uav_module_frame(s.pose, mount.mount);
    const Vec3 ue{s.target_ue_pos.x, s.target_ue_pos.y, 0.0};
    const auto beam = model_.uav_array(s.serve_mount).steer(s.serve_steer);
    return beam.gain_dbi(s.serve_steer.azimuth_deg, s.serve_steer.elevation_deg) -
           beam.gain_dbi(frame.to_local(ue - frame.origin));
  };
  auto face_user = [&]() {
    const double dx = s.target_ue_pos.x - s.pose.position.x;
    const double dy = s.target_ue_pos.y - s.pose.position.y;
    const double horiz = std::hypot(dx, dy);
    if (horiz > 1e-9) s.pose.heading_deg = rad2deg(std::atan2(dy, dx));
    s.pose.downtilt_deg = std::clamp(rad2deg(std::atan2(s.pose.position.z, horiz)), 1.0, 89.0);
  };

  switch (s.state) {
  case S::Standby:
  case S::Landed:
    break;
  case S::EnRoute: {
    move_toward({s.area_center.x, s.area_center.y, cfg.cruise_altitude_m}, cfg.cruise_speed_mps);
    if (horizontal_distance(s.pose.position, s.area_center) <= s.area_radius_m) {
      go(S::Searching);
      s.search_phase_rad = std::atan2(s.pose.position.y - s.area_center.y,
                                      s.pose.position.x - s.area_center.x);
    }
    break;
  }
  case S::Searching: {
    const double radius = std::max(1.0, 0.5 * s.area_radius_m);
    s.search_phase_rad += cfg.cruise_speed_mps * dt / radius;
    move_toward({s.area_center.x + radius * std::cos(s.search_phase_rad),
                 s.area_center.y + radius * std::sin(s.search_phase_rad), cfg.cruise_altitude_m},
                cfg.cruise_speed_mps);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const multibeam::GroundUe *found = nullptr;
    for (const auto &ue : scene.ues) {
      const double d = (s.pose.position - Vec3{ue.position.x, ue.position.y, 0.0}).norm();
      const double p = std::clamp(1.0 - d / cfg.sensing_radius_m, 0.0, 1.0);
      const double draw = u01(s.rng);
      if (!found && draw < p) found = &ue;
    }
    if (found) {
      GuDetected g{found->id, found->position};
      r.emitted.push_back({t_end, g});
      start_approach(g);
    }
    break;
  }
  case S::Approaching: {
    if (!move_toward(setpoint(), cfg.cruise_speed_mps)) break;
    face_user();
    const Vec2 ue = s.target_ue_pos;
    const double slant = (s.pose.position - Vec3{ue.x, ue.y, 0.0}).norm();
    const auto link = best_link(s.pose, s.target_ue, ue);
    const bool acoustic_ok = slant >= standoff_m_;
    const bool link_ok = link && link->snr_db >= channel::lowest_mcs_threshold_db();
    if (acoustic_ok && link_ok) {
      s.hover_setpoint = s.pose.position;
      s.serve_mount = link->uav_mount;
      s.serve_steer = link->steer;
      go(S::Serving);
      break;
    }
    const double h = cfg.serve_height_m;
    const double r_min = standoff_m_ + 1e-6;
    const double min_offset = std::sqrt(std::max(0.0, r_min * r_min - h * h));
    if (!link_ok && s.approach_offset_m > min_offset + 1e-9) {
      s.approach_offset_m = std::max(min_offset, 0.8 * s.approach_offset_m);
    } else {
      r.diagnostics.push_back("t=" + fmt(t_end) + " holding: link budget insufficient at the "
                              "acoustic stand-off");
    }
    break;
  }
  case S::Serving: {
    drift();
    const auto penalty = pointing_penalty();
    if (penalty && *penalty > cfg.csi_degraded_db) {
      r.emitted.push_back({t_end, CsiDegraded{scene.uav_mounts[s.serve_mount].id + "->" + s.target_ue,
                                              *penalty}});
      go(S::Adjusting);
      s.adjust_elapsed_s = 0.0;
    }
    break;
  }
  case S::Adjusting: {
    drift();
    if (entered_adjusting) break;
    s.adjust_elapsed_s += dt;
    if (s.adjust_elapsed_s + 1e-12 >= cfg.realign_latency_s) {
      const auto frame = geometry::uav_module_frame(s.pose, scene.uav_mounts[s.serve_mount].mount);
      try {
        s.serve_steer =
            geometry::steering_toward(frame, {s.target_ue_pos.x, s.target_ue_pos.y, 0.0});
        go(S::Serving);
      } catch (const GeometryError &) {
        r.diagnostics.push_back("t=" + fmt(t_end) + " re-alignment failed: user behind array");
      }
    }
    break;
  }
  case S::Returning:
    if (move_toward(cfg.base, cfg.cruise_speed_mps)) go(S::Landed);
    break;
  }

  s.velocity_mps = (s.pose.position - start) * (1.0 / dt);

  double drain = 0.0;
  switch (s.state) {
  case S::Serving:
  case S::Adjusting: drain = cfg.hover_drain_per_s; break;
  case S::EnRoute:
  case S::Searching:
  case S::Approaching:
  case S::Returning: drain = cfg.cruise_drain_per_s; break;
  default: break;
  }
  s.battery_fraction = std::max(0.0, s.battery_fraction - drain * dt);

  if (airborne_on_mission(s.state) &&
      (s.battery_fraction <= cfg.battery_low_fraction ||
       s.battery_fraction - cfg.battery_reserve_fraction <=
           cfg.return_energy_margin * energy_to_base(s))) {
    r.emitted.push_back({t_end, BatteryLow{}});
    go(S::Returning);
  }

  s.time_s = t_end;
  return r;
}

StepResult step(const UavStatus &status, std::span<const MissionEvent> events, double dt,
                const multibeam::Scene &scene, const MissionConfig &config) {
  return MissionSimulator(scene, config).step(status, events, dt);
}

MissionLog run_mission(const multibeam::Scene &scene, const MissionConfig &config,
                       std::vector<MissionEvent> script, std::uint64_t seed, double max_time_s) {
  require(std::isfinite(max_time_s) && max_time_s > 0.0, "mission duration must be > 0");
  const MissionSimulator sim(scene, config);
  std::stable_sort(script.begin(), script.end(),
                   [](const MissionEvent &a, const MissionEvent &b) { return a.t < b.t; });

  MissionLog log;
  UavStatus s = initial_status(config, seed);
  log.records.push_back({0.0, s.state, s.pose.position, s.battery_fraction, ""});
  std::size_t next = 0;
  const double dt = config.dt_s;
  for (long k = 1; s.state != DispatchState::Landed; ++k) {
    const double t_end = static_cast<double>(k) * dt;
    if (t_end > max_time_s + 1e-9) break;
    s.time_s = static_cast<double>(k - 1) * dt; // no accumulated rounding
    std::vector<MissionEvent> due;
    while (next < script.size() && script[next].t <= t_end + 1e-9) due.push_back(script[next++]);
    auto r = sim.step(s, due, dt);
    s = std::move(r.status);
    std::string events;
    for (const auto *list : {&r.accepted, &r.emitted})
      for (const auto &e : *list) events += (events.empty() ? "" : "|") + format_event(e);
    log.records.push_back({t_end, s.state, s.pose.position, s.battery_fraction, events});
    for (auto &d : r.diagnostics) log.diagnostics.push_back(std::move(d));
  }
  log.final_status = s;
  return log;
}

std::string format_log(const MissionLog &log) {
  std::ostringstream out;
  out << "t,state,x,y,z,battery,event\n";
  for (const auto &r : log.records) {
    out << fmt(r.t, 3) << ',' << to_string(r.state) << ',' << fmt(r.position.x, 4) << ','
        << fmt(r.position.y, 4) << ',' << fmt(r.position.z, 4) << ',' << fmt(r.battery, 6) << ','
        << r.events << '\n';
  }
  return out.str();
}

} // namespace uavabs::dispatch
