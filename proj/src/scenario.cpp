#include "uavabs/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace uavabs::scenario {

// Defined in the generated bundled_scenarios.cpp.
extern const std::vector<std::pair<std::string_view, std::string_view>> kBundledScenarios;

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string &path, const std::string &msg) {
  throw ValidationError((path.empty() ? "/" : path) + ": " + msg);
}

// Object view that records which keys were read so leftovers can be
// reported as unknown.
class Reader {
public:
  Reader(const json &j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "expected an object");
  }

  const std::string &path() const { return path_; }
  std::string at(const std::string &key) const { return path_ + "/" + key; }

  bool has(const std::string &key) {
    seen_.insert(key);
    return j_.contains(key) && !j_.at(key).is_null();
  }

  double number(const std::string &key, double def) {
    return has(key) ? as_number(j_.at(key), at(key)) : def;
  }
  std::optional<double> opt_number(const std::string &key) {
    if (!has(key)) return std::nullopt;
    return as_number(j_.at(key), at(key));
  }
  int integer(const std::string &key, int def) {
    if (!has(key)) return def;
    const auto &v = j_.at(key);
    if (!v.is_number_integer()) fail(at(key), "expected an integer");
    return v.get<int>();
  }
  std::uint64_t u64(const std::string &key, std::uint64_t def) {
    if (!has(key)) return def;
    const auto &v = j_.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
      fail(at(key), "expected a non-negative integer");
    return v.get<std::uint64_t>();
  }
  bool boolean(const std::string &key, bool def) {
    if (!has(key)) return def;
    const auto &v = j_.at(key);
    if (!v.is_boolean()) fail(at(key), "expected true or false");
    return v.get<bool>();
  }
  std::string string(const std::string &key, const std::string &def) {
    if (!has(key)) return def;
    const auto &v = j_.at(key);
    if (!v.is_string()) fail(at(key), "expected a string");
    return v.get<std::string>();
  }
  std::vector<double> numbers(const std::string &key, std::vector<double> def) {
    if (!has(key)) return def;
    const auto &v = j_.at(key);
    if (!v.is_array()) fail(at(key), "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i)
      out.push_back(as_number(v[i], at(key) + "/" + std::to_string(i)));
    return out;
  }
  Vec3 vec3(const std::string &key, Vec3 def) {
    if (!has(key)) return def;
    const auto v = numbers(key, {});
    if (v.size() != 3) fail(at(key), "expected [x, y, z]");
    return {v[0], v[1], v[2]};
  }
  Vec2 vec2(const std::string &key, Vec2 def) {
    if (!has(key)) return def;
    const auto v = numbers(key, {});
    if (v.size() != 2) fail(at(key), "expected [x, y]");
    return {v[0], v[1]};
  }
  Reader child(const std::string &key) { return Reader(j_.at(key), at(key)); }
  std::vector<Reader> children(const std::string &key) {
    std::vector<Reader> out;
    if (!has(key)) return out;
    const auto &v = j_.at(key);
    if (!v.is_array()) fail(at(key), "expected an array of objects");
    for (std::size_t i = 0; i < v.size(); ++i) out.emplace_back(v[i], at(key) + "/" + std::to_string(i));
    return out;
  }

  void finish() const {
    for (const auto &[k, v] : j_.items())
      if (!seen_.count(k)) fail(at(k), "unknown key");
  }

private:
  static double as_number(const json &v, const std::string &path) {
    if (!v.is_number()) fail(path, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(path, "must be finite");
    return d;
  }

  const json &j_;
  std::string path_;
  std::set<std::string> seen_;
};

// Runs a domain validate() and reports its message against a field path.
template <typename Fn> void checked(const std::string &path, Fn &&fn) {
  try {
    fn();
  } catch (const InvalidArgument &e) {
    fail(path, e.what());
  } catch (const GeometryError &e) {
    fail(path, e.what());
  }
}

void read_array(Reader r, array::ArrayGeometry &g, array::ElementModel &m) {
  g.n_elev = r.integer("n_elev", g.n_elev);
  g.n_azim = r.integer("n_azim", g.n_azim);
  g.spacing_wavelengths = r.number("spacing_wavelengths", g.spacing_wavelengths);
  g.carrier_hz = r.number("carrier_hz", g.carrier_hz);
  g.phase_bits = r.integer("phase_bits", g.phase_bits);
  m.exponent_q = r.number("element_exponent", m.exponent_q);
  m.back_lobe_floor_db = r.number("back_lobe_floor_db", m.back_lobe_floor_db);
  r.finish();
  checked(r.path(), [&] {
    g.validate();
    m.validate();
  });
}

ojson write_array(const array::ArrayGeometry &g, const array::ElementModel &m) {
  return {{"n_elev", g.n_elev},
          {"n_azim", g.n_azim},
          {"spacing_wavelengths", g.spacing_wavelengths},
          {"carrier_hz", g.carrier_hz},
          {"phase_bits", g.phase_bits},
          {"element_exponent", m.exponent_q},
          {"back_lobe_floor_db", m.back_lobe_floor_db}};
}

struct MountDefaults {
  array::ArrayGeometry geom;
  array::ElementModel model;
  double tx_power_dbm;
  double noise_figure_db;
};

// A UE mount without yaw/downtilt is aimed at `aim` (the UAV position).
multibeam::BfmMount read_mount(Reader r, const MountDefaults &d, const Vec3 *mount_base,
                               const Vec3 &aim) {
  multibeam::BfmMount m;
  m.id = r.string("id", "");
  if (m.id.empty()) fail(r.at("id"), "module id is required");
  m.mount.offset = r.vec3("offset", {});
  m.geom = d.geom;
  m.model = d.model;
  if (r.has("array")) read_array(r.child("array"), m.geom, m.model);
  m.weight_g = r.number("weight_g", m.weight_g);
  if (r.has("dims_mm")) {
    const auto v = r.numbers("dims_mm", {});
    if (v.size() != 3) fail(r.at("dims_mm"), "expected three dimensions");
    for (double x : v)
      if (x <= 0.0) fail(r.at("dims_mm"), "dimensions must be > 0");
    m.dims_mm = {v[0], v[1], v[2]};
  }
  if (m.weight_g < 0.0) fail(r.at("weight_g"), "must be >= 0");
  m.tx_power_dbm = r.number("tx_power_dbm", d.tx_power_dbm);
  m.noise_figure_db = r.number("noise_figure_db", d.noise_figure_db);
  const auto yaw = r.opt_number("yaw_deg");
  const auto tilt = r.opt_number("downtilt_deg");
  if (mount_base) {
    const Vec3 p = *mount_base + m.mount.offset;
    const Vec3 to = aim - p;
    const double horiz = std::hypot(to.x, to.y);
    m.mount.yaw_deg = yaw ? *yaw : (horiz > 0.0 ? rad2deg(std::atan2(to.y, to.x)) : 0.0);
    m.mount.downtilt_deg = tilt ? *tilt : -rad2deg(std::atan2(to.z, horiz));
  } else {
    m.mount.yaw_deg = yaw.value_or(0.0);
    m.mount.downtilt_deg = tilt.value_or(0.0);
  }
  r.finish();
  return m;
}

ojson write_mount(const multibeam::BfmMount &m) {
  return {{"id", m.id},
          {"offset", {m.mount.offset.x, m.mount.offset.y, m.mount.offset.z}},
          {"yaw_deg", m.mount.yaw_deg},
          {"downtilt_deg", m.mount.downtilt_deg},
          {"array", write_array(m.geom, m.model)},
          {"weight_g", m.weight_g},
          {"dims_mm", {m.dims_mm[0], m.dims_mm[1], m.dims_mm[2]}},
          {"tx_power_dbm", m.tx_power_dbm},
          {"noise_figure_db", m.noise_figure_db}};
}

dispatch::MissionEvent read_event(Reader r) {
  dispatch::MissionEvent e;
  e.t = r.number("t", 0.0);
  if (e.t < 0.0) fail(r.at("t"), "event time must be >= 0");
  const auto type = r.string("type", "");
  if (type == "OutageReport") {
    dispatch::OutageReport o;
    o.area_center = r.vec2("center", {});
    o.area_radius_m = r.number("radius_m", o.area_radius_m);
    if (o.area_radius_m <= 0.0) fail(r.at("radius_m"), "must be > 0");
    e.kind = o;
  } else if (type == "GuDetected") {
    e.kind = dispatch::GuDetected{r.string("ue_id", ""), r.vec2("position", {})};
  } else if (type == "CsiDegraded") {
    e.kind = dispatch::CsiDegraded{r.string("link_id", ""), r.number("db", 0.0)};
  } else if (type == "BatteryLow") {
    e.kind = dispatch::BatteryLow{};
  } else if (type == "ServiceRestored") {
    e.kind = dispatch::ServiceRestored{};
  } else if (type == "WindGust") {
    const double w = r.number("speed_mps", 0.0);
    if (w < 0.0) fail(r.at("speed_mps"), "must be >= 0");
    e.kind = dispatch::WindGust{w};
  } else {
    fail(r.at("type"), "unknown event type '" + type + "'");
  }
  r.finish();
  return e;
}

ojson write_event(const dispatch::MissionEvent &e) {
  ojson j{{"t", e.t}};
  std::visit(
      [&](const auto &k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, dispatch::OutageReport>) {
          j["type"] = "OutageReport";
          j["center"] = {k.area_center.x, k.area_center.y};
          j["radius_m"] = k.area_radius_m;
        } else if constexpr (std::is_same_v<K, dispatch::GuDetected>) {
          j["type"] = "GuDetected";
          j["ue_id"] = k.ue_id;
          j["position"] = {k.position.x, k.position.y};
        } else if constexpr (std::is_same_v<K, dispatch::CsiDegraded>) {
          j["type"] = "CsiDegraded";
          j["link_id"] = k.link_id;
          j["db"] = k.db;
        } else if constexpr (std::is_same_v<K, dispatch::BatteryLow>) {
          j["type"] = "BatteryLow";
        } else if constexpr (std::is_same_v<K, dispatch::ServiceRestored>) {
          j["type"] = "ServiceRestored";
        } else {
          j["type"] = "WindGust";
          j["speed_mps"] = k.speed_mps;
        }
      },
      e.kind);
  return j;
}

void read_mission_config(Reader &r, dispatch::MissionConfig &c) {
  c.base = r.vec3("base", c.base);
  c.cruise_altitude_m = r.number("cruise_altitude_m", c.cruise_altitude_m);
  c.serve_height_m = r.number("serve_height_m", c.serve_height_m);
  c.standoff_d0_m = r.number("standoff_d0_m", c.standoff_d0_m);
  c.cruise_speed_mps = r.number("cruise_speed_mps", c.cruise_speed_mps);
  c.max_speed_mps = r.number("max_speed_mps", c.max_speed_mps);
  c.sensing_radius_m = r.number("sensing_radius_m", c.sensing_radius_m);
  c.realign_latency_s = r.number("realign_latency_s", c.realign_latency_s);
  c.battery_low_fraction = r.number("battery_low_fraction", c.battery_low_fraction);
  c.battery_reserve_fraction = r.number("battery_reserve_fraction", c.battery_reserve_fraction);
  c.return_energy_margin = r.number("return_energy_margin", c.return_energy_margin);
  c.cruise_drain_per_s = r.number("cruise_drain_per_s", c.cruise_drain_per_s);
  c.hover_drain_per_s = r.number("hover_drain_per_s", c.hover_drain_per_s);
  c.drift_sigma_m_per_sqrt_s = r.number("drift_sigma_m_per_sqrt_s", c.drift_sigma_m_per_sqrt_s);
  c.altitude_sigma_m_per_sqrt_s =
      r.number("altitude_sigma_m_per_sqrt_s", c.altitude_sigma_m_per_sqrt_s);
  c.drift_box_m = r.number("drift_box_m", c.drift_box_m);
  c.altitude_box_m = r.number("altitude_box_m", c.altitude_box_m);
  c.wind_reference_mps = r.number("wind_reference_mps", c.wind_reference_mps);
  c.acoustic_threshold_db = r.number("acoustic_threshold_db", c.acoustic_threshold_db);
  c.csi_degraded_db = r.number("csi_degraded_db", c.csi_degraded_db);
  c.arrival_tolerance_m = r.number("arrival_tolerance_m", c.arrival_tolerance_m);
  c.dt_s = r.number("dt_s", c.dt_s);
}

ojson write_acoustic_model(const dispatch::AcousticModel &m) {
  return {{"level_at_1m_db", m.level_at_1m_db},
          {"spreading_db_per_decade", m.spreading_db_per_decade},
          {"excess_db_per_m", m.excess_db_per_m}};
}

dispatch::AcousticModel read_acoustic_model(Reader r) {
  dispatch::AcousticModel m;
  m.level_at_1m_db = r.number("level_at_1m_db", m.level_at_1m_db);
  m.spreading_db_per_decade = r.number("spreading_db_per_decade", m.spreading_db_per_decade);
  m.excess_db_per_m = r.number("excess_db_per_m", m.excess_db_per_m);
  r.finish();
  checked(r.path(), [&] { m.validate(); });
  return m;
}

std::pair<std::size_t, std::size_t> line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

} // namespace

Scenario parse_scenario(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error &e) {
    const auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ValidationError("line " + std::to_string(line) + ", column " + std::to_string(col) +
                          ": malformed JSON (" + e.what() + ")");
  }

  Scenario s;
  Reader root(doc, "");
  s.name = root.string("name", s.name);
  if (s.name.empty() || s.name.find_first_of("/\\ ") != std::string::npos)
    fail(root.at("name"), "name must be non-empty without spaces or slashes");
  s.seed = root.u64("seed", s.seed);
  if (root.has("array")) read_array(root.child("array"), s.array, s.element);

  if (root.has("pattern")) {
    Reader r = root.child("pattern");
    PatternSpec p;
    p.steer.azimuth_deg = r.number("steer_az_deg", 0.0);
    p.steer.elevation_deg = r.number("steer_el_deg", 0.0);
    p.az_step_deg = r.number("az_step_deg", p.az_step_deg);
    p.el_step_deg = r.number("el_step_deg", p.el_step_deg);
    p.cut_step_deg = r.number("cut_step_deg", p.cut_step_deg);
    p.write_grid = r.boolean("write_grid", p.write_grid);
    r.finish();
    checked(r.path(), [&] { p.steer.validate(); });
    for (double step : {p.az_step_deg, p.el_step_deg, p.cut_step_deg})
      if (!(step > 0.0 && step <= array::kMaxStepDeg))
        fail(r.path(), "pattern steps must be in (0, 5] degrees");
    s.pattern = p;
  }

  if (root.has("coverage")) {
    Reader r = root.child("coverage");
    CoverageSpec c;
    c.heights_m = r.numbers("heights_m", c.heights_m);
    c.alphas_deg = r.numbers("alphas_deg", c.alphas_deg);
    c.hpbw_e_deg = r.opt_number("hpbw_e_deg");
    r.finish();
    if (c.heights_m.empty() || c.alphas_deg.empty())
      fail(r.path(), "heights_m and alphas_deg must be non-empty");
    for (double h : c.heights_m)
      if (h <= 0.0) fail(r.at("heights_m"), "heights must be > 0");
    for (double a : c.alphas_deg)
      if (a <= 0.0 || a >= 90.0) fail(r.at("alphas_deg"), "downtilt must be in (0, 90)");
    if (c.hpbw_e_deg && (*c.hpbw_e_deg <= 0.0 || *c.hpbw_e_deg >= 180.0))
      fail(r.at("hpbw_e_deg"), "must be in (0, 180)");
    s.coverage = c;
  }

  // Channel defaults are needed by the link sweep and by every mount.
  ChannelSpec &ch = s.channel;
  if (root.has("channel")) {
    Reader r = root.child("channel");
    auto &cp = ch.params;
    cp.path_loss_exponent = r.number("path_loss_exponent", cp.path_loss_exponent);
    cp.reference_fspl_db = r.opt_number("reference_fspl_db");
    cp.oxygen_absorption_db_per_km =
        r.number("oxygen_absorption_db_per_km", cp.oxygen_absorption_db_per_km);
    cp.shadow_sigma_db = r.number("shadow_sigma_db", cp.shadow_sigma_db);
    ch.occupied_bw_hz = r.number("occupied_bw_hz", ch.occupied_bw_hz);
    ch.mac_efficiency = r.number("mac_efficiency", ch.mac_efficiency);
    ch.aci_rejection_db = r.number("aci_rejection_db", ch.aci_rejection_db);
    if (r.has("access_channels")) {
      ch.access_channels.clear();
      for (double v : r.numbers("access_channels", {})) {
        if (v != std::floor(v)) fail(r.at("access_channels"), "channels are integers");
        ch.access_channels.push_back(static_cast<int>(v));
      }
      if (ch.access_channels.empty()) fail(r.at("access_channels"), "at least one access channel");
    }
    if (r.has("backhaul_channel")) ch.backhaul_channel = r.integer("backhaul_channel", 0);
    ch.tx_power_dbm = r.number("tx_power_dbm", ch.tx_power_dbm);
    ch.noise_figure_db = r.number("noise_figure_db", ch.noise_figure_db);
    r.finish();
    checked(r.path(), [&] {
      cp.validate();
      require(ch.occupied_bw_hz > 0.0, "occupied bandwidth must be > 0");
      require(ch.mac_efficiency > 0.0 && ch.mac_efficiency <= 1.0,
              "MAC efficiency must be in (0, 1]");
      require(ch.aci_rejection_db >= 0.0, "ACI rejection must be >= 0");
      for (int c : ch.access_channels) channel::WigigChannel::from_index(c, ch.occupied_bw_hz);
      if (ch.backhaul_channel)
        channel::WigigChannel::from_index(*ch.backhaul_channel, ch.occupied_bw_hz);
    });
  }
  const MountDefaults md{s.array, s.element, ch.tx_power_dbm, ch.noise_figure_db};

  if (root.has("link")) {
    Reader r = root.child("link");
    LinkSpec l;
    l.distances_m = r.numbers("distances_m", {10.0, 20.0, 41.34, 60.0, 80.0, 100.0});
    l.tx_gain_dbi = r.opt_number("tx_gain_dbi");
    l.rx_gain_dbi = r.opt_number("rx_gain_dbi");
    l.channel = r.integer("channel", l.channel);
    l.tx_power_dbm = r.number("tx_power_dbm", md.tx_power_dbm);
    l.noise_figure_db = r.number("noise_figure_db", md.noise_figure_db);
    r.finish();
    for (double d : l.distances_m)
      if (d < 1.0) fail(r.at("distances_m"), "distances must be >= 1 m");
    checked(r.at("channel"),
            [&] { channel::WigigChannel::from_index(l.channel, ch.occupied_bw_hz); });
    s.link = l;
  }

  if (root.has("uav")) {
    Reader r = root.child("uav");
    multibeam::Scene scene;
    scene.uav.position = r.vec3("position", {0.0, 0.0, 35.0});
    scene.uav.heading_deg = r.number("heading_deg", 0.0);
    scene.uav.downtilt_deg = r.number("downtilt_deg", scene.uav.downtilt_deg);
    scene.payload_budget_g = r.number("payload_budget_g", scene.payload_budget_g);
    scene.other_payload_g = r.number("other_payload_g", scene.other_payload_g);
    for (auto m : r.children("mounts")) scene.uav_mounts.push_back(read_mount(m, md, nullptr, {}));
    r.finish();
    checked(r.path(), [&] { scene.uav.validate(); });
    scene.channel_params = ch.params;
    scene.occupied_bw_hz = ch.occupied_bw_hz;
    scene.mac_efficiency = ch.mac_efficiency;
    scene.aci_rejection_db = ch.aci_rejection_db;
    scene.access_channels = ch.access_channels;
    scene.backhaul_channel = ch.backhaul_channel;

    std::vector<Vec2> layout_pos;
    if (root.has("mu_layout")) {
      Reader lr = root.child("mu_layout");
      MuLayoutSpec mu;
      mu.d0_m = lr.number("d0_m", mu.d0_m);
      mu.d1_m = lr.number("d1_m", mu.d1_m);
      mu.d2_m = lr.number("d2_m", mu.d2_m);
      lr.finish();
      geometry::MuLayout lay;
      checked(lr.path(), [&] { lay = geometry::mu_layout(scene.uav, mu.d0_m, mu.d1_m, mu.d2_m); });
      layout_pos = {lay.ue_a, lay.ue_b};
      s.mu_layout = mu;
    }
    const auto ue_readers = root.children("ues");
    if (s.mu_layout && ue_readers.size() != 2)
      fail(root.at("ues"), "mu_layout places exactly two users");
    for (std::size_t i = 0; i < ue_readers.size(); ++i) {
      Reader ur = ue_readers[i];
      multibeam::GroundUe ue;
      ue.id = ur.string("id", "");
      if (ue.id.empty()) fail(ur.at("id"), "user id is required");
      if (s.mu_layout) {
        if (ur.has("position")) fail(ur.at("position"), "position is set by mu_layout");
        ue.position = layout_pos[i];
      } else {
        if (!ur.has("position")) fail(ur.at("position"), "user position is required");
        ue.position = ur.vec2("position", {});
      }
      const Vec3 base{ue.position.x, ue.position.y, 0.0};
      for (auto m : ur.children("mounts"))
        ue.mounts.push_back(read_mount(m, md, &base, scene.uav.position));
      ur.finish();
      scene.ues.push_back(std::move(ue));
    }
    s.scene = std::move(scene);
  } else {
    for (const char *k : {"ues", "mu_layout"})
      if (root.has(k)) fail(root.at(k), "requires a uav section");
  }

  if (root.has("mission")) {
    if (!s.scene) fail(root.at("mission"), "requires a uav section");
    Reader r = root.child("mission");
    MissionSpec m;
    read_mission_config(r, m.config);
    if (r.has("acoustic")) m.config.acoustic = read_acoustic_model(r.child("acoustic"));
    m.max_time_s = r.number("max_time_s", m.max_time_s);
    for (auto e : r.children("events")) m.events.push_back(read_event(e));
    r.finish();
    checked(r.path(), [&] {
      m.config.validate();
      require(m.max_time_s > 0.0, "max_time_s must be > 0");
    });
    s.mission = std::move(m);
  }

  if (root.has("acoustics")) {
    Reader r = root.child("acoustics");
    AcousticsSpec a;
    if (r.has("model")) a.model = read_acoustic_model(r.child("model"));
    if (r.has("fit")) {
      Reader fr = r.child("fit");
      AcousticFit f;
      f.distance_m = fr.number("distance_m", f.distance_m);
      f.level_db = fr.number("level_db", f.level_db);
      fr.finish();
      checked(fr.path(), [&] {
        a.model = dispatch::AcousticModel::fit_two_point(a.model.level_at_1m_db, f.distance_m,
                                                         f.level_db,
                                                         a.model.spreading_db_per_decade);
      });
      a.fit = f;
    }
    a.thresholds_db = r.numbers("thresholds_db", a.thresholds_db);
    a.distances_m = r.numbers("distances_m", a.distances_m);
    r.finish();
    for (double d : a.distances_m)
      if (d < 1.0) fail(r.at("distances_m"), "distances must be >= 1 m");
    s.acoustics = a;
  }

  if (root.has("outputs")) {
    Reader r = root.child("outputs");
    s.out_dir = r.string("dir", s.out_dir);
    r.finish();
  }
  root.finish();
  return s;
}

Scenario load_scenario(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(path.string() + ": cannot read scenario file");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scenario(buf.str());
  } catch (const ValidationError &e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

std::string resolved_config(const Scenario &s, int indent) {
  ojson j;
  j["name"] = s.name;
  j["seed"] = s.seed;
  j["array"] = write_array(s.array, s.element);
  if (s.pattern) {
    const auto &p = *s.pattern;
    j["pattern"] = {{"steer_az_deg", p.steer.azimuth_deg},
                    {"steer_el_deg", p.steer.elevation_deg},
                    {"az_step_deg", p.az_step_deg},
                    {"el_step_deg", p.el_step_deg},
                    {"cut_step_deg", p.cut_step_deg},
                    {"write_grid", p.write_grid}};
  }
  if (s.coverage) {
    const auto &c = *s.coverage;
    j["coverage"] = {{"heights_m", c.heights_m},
                     {"alphas_deg", c.alphas_deg},
                     {"hpbw_e_deg", c.hpbw_e_deg ? ojson(*c.hpbw_e_deg) : ojson(nullptr)}};
  }

  const auto &ch = s.channel;
  const auto &cp = ch.params;
  j["channel"] = {
      {"path_loss_exponent", cp.path_loss_exponent},
      {"reference_fspl_db", cp.reference_fspl_db ? ojson(*cp.reference_fspl_db) : ojson(nullptr)},
      {"oxygen_absorption_db_per_km", cp.oxygen_absorption_db_per_km},
      {"shadow_sigma_db", cp.shadow_sigma_db},
      {"occupied_bw_hz", ch.occupied_bw_hz},
      {"mac_efficiency", ch.mac_efficiency},
      {"aci_rejection_db", ch.aci_rejection_db},
      {"access_channels", ch.access_channels},
      {"backhaul_channel", ch.backhaul_channel ? ojson(*ch.backhaul_channel) : ojson(nullptr)},
      {"tx_power_dbm", ch.tx_power_dbm},
      {"noise_figure_db", ch.noise_figure_db}};

  if (s.link) {
    const auto &l = *s.link;
    j["link"] = {{"distances_m", l.distances_m},
                 {"tx_gain_dbi", l.tx_gain_dbi ? ojson(*l.tx_gain_dbi) : ojson(nullptr)},
                 {"rx_gain_dbi", l.rx_gain_dbi ? ojson(*l.rx_gain_dbi) : ojson(nullptr)},
                 {"channel", l.channel},
                 {"tx_power_dbm", l.tx_power_dbm},
                 {"noise_figure_db", l.noise_figure_db}};
  }
  if (s.scene) {
    const auto &sc = *s.scene;
    ojson mounts = ojson::array();
    for (const auto &m : sc.uav_mounts) mounts.push_back(write_mount(m));
    j["uav"] = {{"position", {sc.uav.position.x, sc.uav.position.y, sc.uav.position.z}},
                {"heading_deg", sc.uav.heading_deg},
                {"downtilt_deg", sc.uav.downtilt_deg},
                {"payload_budget_g", sc.payload_budget_g},
                {"other_payload_g", sc.other_payload_g},
                {"mounts", mounts}};
    if (s.mu_layout)
      j["mu_layout"] = {
          {"d0_m", s.mu_layout->d0_m}, {"d1_m", s.mu_layout->d1_m}, {"d2_m", s.mu_layout->d2_m}};
    ojson ues = ojson::array();
    for (const auto &ue : sc.ues) {
      ojson u{{"id", ue.id}};
      if (!s.mu_layout) u["position"] = {ue.position.x, ue.position.y};
      ojson um = ojson::array();
      for (const auto &m : ue.mounts) um.push_back(write_mount(m));
      u["mounts"] = um;
      ues.push_back(u);
    }
    j["ues"] = ues;
  }
  if (s.mission) {
    const auto &c = s.mission->config;
    ojson events = ojson::array();
    for (const auto &e : s.mission->events) events.push_back(write_event(e));
    j["mission"] = {{"base", {c.base.x, c.base.y, c.base.z}},
                    {"cruise_altitude_m", c.cruise_altitude_m},
                    {"serve_height_m", c.serve_height_m},
                    {"standoff_d0_m", c.standoff_d0_m},
                    {"cruise_speed_mps", c.cruise_speed_mps},
                    {"max_speed_mps", c.max_speed_mps},
                    {"sensing_radius_m", c.sensing_radius_m},
                    {"realign_latency_s", c.realign_latency_s},
                    {"battery_low_fraction", c.battery_low_fraction},
                    {"battery_reserve_fraction", c.battery_reserve_fraction},
                    {"return_energy_margin", c.return_energy_margin},
                    {"cruise_drain_per_s", c.cruise_drain_per_s},
                    {"hover_drain_per_s", c.hover_drain_per_s},
                    {"drift_sigma_m_per_sqrt_s", c.drift_sigma_m_per_sqrt_s},
                    {"altitude_sigma_m_per_sqrt_s", c.altitude_sigma_m_per_sqrt_s},
                    {"drift_box_m", c.drift_box_m},
                    {"altitude_box_m", c.altitude_box_m},
                    {"wind_reference_mps", c.wind_reference_mps},
                    {"acoustic_threshold_db", c.acoustic_threshold_db},
                    {"acoustic", write_acoustic_model(c.acoustic)},
                    {"csi_degraded_db", c.csi_degraded_db},
                    {"arrival_tolerance_m", c.arrival_tolerance_m},
                    {"dt_s", c.dt_s},
                    {"max_time_s", s.mission->max_time_s},
                    {"events", events}};
  }
  if (s.acoustics) {
    const auto &a = *s.acoustics;
    // The fitted model is written out directly; no fit block is needed.
    j["acoustics"] = {{"model", write_acoustic_model(a.model)},
                      {"thresholds_db", a.thresholds_db},
                      {"distances_m", a.distances_m}};
  }
  j["outputs"] = {{"dir", s.out_dir}};
  return j.dump(indent);
}

std::vector<std::string> bundled_scenario_names() {
  std::vector<std::string> out;
  for (const auto &[name, text] : kBundledScenarios) out.emplace_back(name);
  return out;
}

std::string_view bundled_scenario_text(std::string_view name) {
  for (const auto &[n, text] : kBundledScenarios)
    if (n == name) return text;
  throw ValidationError("unknown bundled scenario '" + std::string(name) + "'");
}

} // namespace uavabs::scenario
