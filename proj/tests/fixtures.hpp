#pragma once

// Scene builders shared by the unit and acceptance tests.

#include <functional>
#include <optional>
#include <random>
#include <string>

#include "uavabs/multibeam.hpp"

namespace fixtures {

using namespace uavabs;

inline multibeam::BfmMount uav_mount(const std::string &id, Vec3 offset, double yaw = 0.0) {
  multibeam::BfmMount m;
  m.id = id;
  m.mount.offset = offset;
  m.mount.yaw_deg = yaw;
  return m;
}

// Ground module at base + offset, boresight aimed at `at`.
inline multibeam::BfmMount aimed_mount(const std::string &id, Vec2 base, Vec3 offset, Vec3 at) {
  multibeam::BfmMount m;
  m.id = id;
  m.mount.offset = offset;
  const Vec3 p{base.x + offset.x, base.y + offset.y, offset.z};
  const Vec3 d = at - p;
  m.mount.yaw_deg = rad2deg(std::atan2(d.y, d.x));
  m.mount.downtilt_deg = -rad2deg(std::atan2(d.z, std::hypot(d.x, d.y)));
  return m;
}

inline geometry::UavPose field_pose() {
  geometry::UavPose p;
  p.position = {0.0, 0.0, 35.0};
  p.downtilt_deg = rad2deg(std::atan2(35.0, 22.0));
  return p;
}

// Single user with two modules at (22, 0), two UAV arm modules.
inline multibeam::Scene su_scene() {
  multibeam::Scene s;
  s.uav = field_pose();
  s.uav_mounts = {uav_mount("uav_left", {0, 0.12, 0}), uav_mount("uav_right", {0, -0.12, 0})};
  multibeam::GroundUe ue{"ue1", {22.0, 0.0}, {}};
  ue.mounts = {aimed_mount("bfm_a", ue.position, {0, 0.05, 0}, s.uav.position),
               aimed_mount("bfm_b", ue.position, {0, -0.05, 0}, s.uav.position)};
  s.ues = {ue};
  return s;
}

// Two users mirrored about the stand-off axis, one module each.
inline multibeam::Scene mirrored_scene(double half_sep_m) {
  multibeam::Scene s;
  s.uav = field_pose();
  s.uav_mounts = {uav_mount("uav_left", {0, 0.12, 0}), uav_mount("uav_right", {0, -0.12, 0})};
  for (int k : {0, 1}) {
    const double y = k == 0 ? half_sep_m : -half_sep_m;
    multibeam::GroundUe ue{k == 0 ? "ue_l" : "ue_r", {22.0, y}, {}};
    ue.mounts = {aimed_mount("bfm", ue.position, {}, s.uav.position)};
    s.ues.push_back(ue);
  }
  return s;
}

// Random small scene: 1..max_uav UAV modules on a ring, 1..max_ue users with
// one or two modules each, all modules aimed roughly at each other.
inline multibeam::Scene random_scene(std::mt19937_64 &rng, int max_uav, int max_ue_mods) {
  std::uniform_int_distribution<int> n_uav(1, max_uav), n_mods(1, max_ue_mods);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  multibeam::Scene s;
  s.uav.position = {0.0, 0.0, 15.0 + 30.0 * u01(rng)};
  s.uav.downtilt_deg = 35.0 + 30.0 * u01(rng);
  const int na = n_uav(rng);
  for (int a = 0; a < na; ++a) {
    const double yaw = -40.0 + 80.0 * u01(rng);
    s.uav_mounts.push_back(uav_mount("u" + std::to_string(a),
                                     {0.0, 0.15 * (a - (na - 1) / 2.0), 0.0}, yaw));
  }
  int mods = n_mods(rng);
  int ue_idx = 0;
  while (mods > 0) {
    const int here = std::min(mods, 1 + static_cast<int>(u01(rng) * 2.0));
    multibeam::GroundUe ue{"g" + std::to_string(ue_idx++),
                           {10.0 + 40.0 * u01(rng), -20.0 + 40.0 * u01(rng)}, {}};
    for (int b = 0; b < here; ++b)
      ue.mounts.push_back(aimed_mount("m" + std::to_string(b), ue.position,
                                      {0.0, 0.06 * b, 0.0}, s.uav.position));
    s.ues.push_back(ue);
    mods -= here;
  }
  if (u01(rng) < 0.3) s.access_channels = {2};
  s.channel_params.path_loss_exponent = 2.0 + 0.5 * u01(rng);
  return s;
}

// Exhaustive search over every set of streams with distinct modules on both
// sides and any usable channel.
inline multibeam::AssignmentScore brute_force_best(const multibeam::Scene &scene) {
  std::vector<std::pair<std::size_t, std::size_t>> ue_mods;
  for (std::size_t u = 0; u < scene.ues.size(); ++u)
    for (std::size_t b = 0; b < scene.ues[u].mounts.size(); ++b) ue_mods.push_back({u, b});
  std::vector<int> chans;
  for (int c : scene.access_channels)
    if (!scene.backhaul_channel || c != *scene.backhaul_channel) chans.push_back(c);

  // choice[a] = -1 (idle) or index into ue_mods * chans.
  const int per = static_cast<int>(ue_mods.size() * chans.size());
  std::vector<int> choice(scene.uav_mounts.size(), -1);
  std::optional<multibeam::AssignmentScore> best;
  const multibeam::SceneModel model(scene);
  std::function<void(std::size_t)> rec = [&](std::size_t a) {
    if (a == choice.size()) {
      multibeam::Assignment asg;
      std::vector<bool> used(ue_mods.size(), false);
      for (std::size_t i = 0; i < choice.size(); ++i) {
        if (choice[i] < 0) continue;
        const auto m = static_cast<std::size_t>(choice[i]) / chans.size();
        if (used[m]) return;
        used[m] = true;
        try {
          asg.links.push_back(multibeam::make_link(scene, i, ue_mods[m].first, ue_mods[m].second,
                                        chans[static_cast<std::size_t>(choice[i]) % chans.size()]));
        } catch (const GeometryError &) {
          return;
        }
      }
      if (asg.links.empty()) return;
      const auto rep = multibeam::sinr_matrix(model, asg);
      for (const auto &l : rep.links)
        if (l.outage) return;
      const auto s = multibeam::score(scene, rep, asg);
      if (!best || s.min_ue_bps > best->min_ue_bps + 1e-3 ||
          (std::abs(s.min_ue_bps - best->min_ue_bps) <= 1e-3 &&
           s.aggregate_bps > best->aggregate_bps + 1e-3))
        best = s;
      return;
    }
    for (int c = -1; c < per; ++c) {
      choice[a] = c;
      rec(a + 1);
    }
  };
  rec(0);
  return best.value_or(multibeam::AssignmentScore{});
}

} // namespace fixtures
