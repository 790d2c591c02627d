#include "uavabs/runner.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace uavabs::runner {

namespace {

using scenario::Scenario;
using scenario::ValidationError;

std::string num(double v, int prec = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  // Avoid "-0.0000" so sign noise does not leak into byte comparisons.
  std::string s = buf;
  if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);
  return s;
}

std::string opt_num(const std::optional<double> &v, int prec = 4) { return v ? num(*v, prec) : ""; }

Scenario effective(const Scenario &s, const RunOptions &opt) {
  Scenario e = s;
  if (opt.seed) e.seed = *opt.seed;
  return e;
}

// CSV text: a "# config=" comment with the resolved scenario, then the header.
class Csv {
public:
  Csv(const Scenario &s, const std::string &header) {
    out_ << "# config=" << scenario::resolved_config(s) << '\n' << header << '\n';
  }
  template <typename... Fields> void row(const Fields &...fields) {
    bool first = true;
    ((out_ << (first ? "" : ",") << fields, first = false), ...);
    out_ << '\n';
  }
  std::string str() const { return out_.str(); }

private:
  std::ostringstream out_;
};

const multibeam::Scene &require_scene(const Scenario &s) {
  if (!s.scene) throw ValidationError("/uav: scenario has no uav section");
  return *s.scene;
}

} // namespace

void RunResult::append(RunResult other) {
  for (auto &f : other.files) files.push_back(std::move(f));
  for (auto &n : other.notes) notes.push_back(std::move(n));
}

RunResult run_pattern(const Scenario &s0, const RunOptions &opt) {
  const Scenario s = effective(s0, opt);
  const scenario::PatternSpec spec = s.pattern.value_or(scenario::PatternSpec{});
  const auto p = array::compute_pattern(s.array, s.element, spec.steer, spec.az_step_deg,
                                        spec.el_step_deg, spec.cut_step_deg);
  const auto st = array::pattern_stats(p);

  RunResult r;
  Csv az(s, "angle_deg,gain_dbi");
  for (std::size_t i = 0; i < p.azimuth_cut.angle_deg.size(); ++i)
    az.row(num(p.azimuth_cut.angle_deg[i]), num(p.azimuth_cut.gain_dbi[i]));
  Csv el(s, "angle_deg,gain_dbi");
  for (std::size_t i = 0; i < p.elevation_cut.angle_deg.size(); ++i)
    el.row(num(p.elevation_cut.angle_deg[i]), num(p.elevation_cut.gain_dbi[i]));
  Csv stats(s, "peak_dbi,hpbw_a_deg,hpbw_e_deg,sll_db");
  stats.row(num(st.peak_gain_dbi), opt_num(st.hpbw_azimuth_deg), opt_num(st.hpbw_elevation_deg),
            opt_num(st.sll_db));
  r.files.push_back({s.name + "_azimuth_cut.csv", az.str()});
  r.files.push_back({s.name + "_elevation_cut.csv", el.str()});
  r.files.push_back({s.name + "_stats.csv", stats.str()});
  if (spec.write_grid) {
    Csv grid(s, "az_deg,el_deg,gain_dbi");
    for (std::size_t i = 0; i < p.azimuth_deg.size(); ++i)
      for (std::size_t j = 0; j < p.elevation_deg.size(); ++j)
        grid.row(num(p.azimuth_deg[i], 2), num(p.elevation_deg[j], 2), num(p.at(i, j)));
    r.files.push_back({s.name + "_grid.csv", grid.str()});
  }
  r.notes.push_back(s.name + ": peak " + num(st.peak_gain_dbi, 2) + " dBi, HPBW_A " +
                    opt_num(st.hpbw_azimuth_deg, 2) + " deg, HPBW_E " +
                    opt_num(st.hpbw_elevation_deg, 2) + " deg, SLL " + opt_num(st.sll_db, 2) +
                    " dB");
  return r;
}

RunResult run_coverage(const Scenario &s0, const RunOptions &opt) {
  const Scenario s = effective(s0, opt);
  const scenario::CoverageSpec spec = s.coverage.value_or(scenario::CoverageSpec{});
  double hpbw_e = 0.0;
  if (spec.hpbw_e_deg) {
    hpbw_e = *spec.hpbw_e_deg;
  } else {
    const auto st = array::pattern_stats(array::compute_pattern(s.array, s.element, {}));
    if (!st.hpbw_elevation_deg)
      throw ValidationError("/coverage/hpbw_e_deg: array has no elevation half-power beamwidth; "
                            "set it explicitly");
    hpbw_e = *st.hpbw_elevation_deg;
  }

  RunResult r;
  Csv csv(s, "h_m,alpha_deg,hpbw_e_deg,L1_m,L2_m,L3_m,span_m");
  for (double h : spec.heights_m) {
    for (double alpha : spec.alphas_deg) {
      geometry::UavPose pose;
      pose.position = {0.0, 0.0, h};
      pose.downtilt_deg = alpha;
      try {
        const auto fp = geometry::footprint(pose, hpbw_e);
        csv.row(num(h, 2), num(alpha, 2), num(hpbw_e, 2), num(fp.near_m), num(fp.boresight_m),
                num(fp.far_m), num(fp.span_m()));
      } catch (const GeometryError &e) {
        r.notes.push_back(s.name + ": skipped h=" + num(h, 2) + " alpha=" + num(alpha, 2) + ": " +
                          e.what());
      }
    }
  }
  r.files.push_back({s.name + "_coverage.csv", csv.str()});
  return r;
}

RunResult run_link(const Scenario &s0, const RunOptions &opt) {
  const Scenario s = effective(s0, opt);
  if (!s.link) throw ValidationError("/link: scenario has no link section");
  const auto &spec = *s.link;
  const auto &ch = s.channel;

  double g_default = 0.0;
  if (!spec.tx_gain_dbi || !spec.rx_gain_dbi)
    g_default = array::PhasedArray(s.array, s.element).steer({}).peak().gain_dbi;
  const auto wch = channel::WigigChannel::from_index(spec.channel, ch.occupied_bw_hz);
  const double noise = channel::noise_floor_dbm(wch.occupied_bw_hz, spec.noise_figure_db);
  channel::Rng rng(s.seed);

  RunResult r;
  Csv csv(s, "distance_m,path_loss_db,snr_db,phy_mbps,mac_mbps");
  for (double d : spec.distances_m) {
    const double pl = channel::path_loss_db(ch.params, d, wch.center_hz,
                                            ch.params.shadow_sigma_db > 0.0 ? &rng : nullptr);
    const double snr = spec.tx_power_dbm + spec.tx_gain_dbi.value_or(g_default) +
                       spec.rx_gain_dbi.value_or(g_default) - pl - noise;
    const double phy = channel::mcs_rate(snr);
    csv.row(num(d, 2), num(pl), num(snr), num(phy / 1e6, 2),
            num(channel::mac_throughput(phy, ch.mac_efficiency) / 1e6, 2));
  }
  r.files.push_back({s.name + "_link.csv", csv.str()});
  return r;
}

EvaluateSummary evaluate_scene(const Scenario &s0, const RunOptions &opt) {
  const Scenario s = effective(s0, opt);
  const auto &scene = require_scene(s);
  const auto violations = multibeam::validate_scene(scene);
  if (!violations.empty()) {
    std::string msg = "scene validation failed:";
    for (const auto &v : violations) msg += "\n  " + v.rule + " [" + v.entities + "]: " + v.message;
    throw ValidationError(msg);
  }
  EvaluateSummary out;
  out.assignment = multibeam::assign_beams(scene);
  channel::Rng rng(s.seed);
  out.report = multibeam::sinr_matrix(scene, out.assignment,
                                      scene.channel_params.shadow_sigma_db > 0.0 ? &rng : nullptr);
  return out;
}

RunResult run_evaluate(const Scenario &s0, const RunOptions &opt) {
  const Scenario s = effective(s0, opt);
  const auto ev = evaluate_scene(s, opt);
  const auto &scene = *s.scene;

  RunResult r;
  for (const auto &w : multibeam::scene_warnings(scene))
    r.notes.push_back(s.name + ": warning " + w.rule + " [" + w.entities + "]: " + w.message);
  if (!ev.assignment.diagnostic.empty()) r.notes.push_back(s.name + ": " + ev.assignment.diagnostic);

  Csv csv(s, "link_id,channel,sinr_db,phy_mbps,mac_mbps");
  Csv detail(s, "link_id,channel,distance_m,tx_gain_dbi,rx_gain_dbi,signal_dbm,"
                "interference_dbm,noise_dbm,snr_db,sinr_db,mcs");
  double phy_total = 0.0;
  for (const auto &l : ev.report.links) {
    csv.row(l.link_id, l.channel, l.outage ? "" : num(l.sinr_db), num(l.phy_rate_bps / 1e6, 2),
            num(l.mac_throughput_bps / 1e6, 2));
    detail.row(l.link_id, l.channel, num(l.distance_m), num(l.tx_gain_dbi), num(l.rx_gain_dbi),
               num(l.signal_dbm), l.interference_dbm > -1e299 ? num(l.interference_dbm) : "",
               num(l.noise_dbm), num(l.snr_db), l.outage ? "" : num(l.sinr_db), l.mcs);
    phy_total += l.phy_rate_bps;
  }
  csv.row("aggregate", "", "", num(phy_total / 1e6, 2), num(ev.report.aggregate_bps / 1e6, 2));
  r.files.push_back({s.name + "_evaluate.csv", csv.str()});
  r.files.push_back({s.name + "_links.csv", detail.str()});

  if (!ev.assignment.links.empty()) {
    Csv drift(s, "link_id,drift_m,tx_gain_loss_db");
    for (double d : {0.5, 1.0, 2.0}) {
      const auto loss = multibeam::drift_tolerance(scene, ev.assignment, d);
      for (std::size_t i = 0; i < loss.size(); ++i)
        drift.row(multibeam::link_id(scene, ev.assignment.links[i]), num(d, 2), num(loss[i]));
    }
    r.files.push_back({s.name + "_drift.csv", drift.str()});
  }

  if (s.mu_layout) {
    const auto g =
        geometry::mu_geometry(scene.uav, s.mu_layout->d0_m, s.mu_layout->d1_m, s.mu_layout->d2_m);
    Csv geo(s, "d0_m,d1_m,d2_m,beta_deg");
    geo.row(num(g.d0_m, 2), num(g.d1_m, 2), num(g.d2_m, 2), num(g.beta_deg));
    r.files.push_back({s.name + "_geometry.csv", geo.str()});
  }
  r.notes.push_back(s.name + ": aggregate MAC throughput " + num(ev.report.aggregate_bps / 1e6, 1) +
                    " Mbps over " + std::to_string(ev.report.links.size()) + " stream(s)");
  return r;
}

RunResult run_mission(const Scenario &s0, const RunOptions &opt) {
  const Scenario s = effective(s0, opt);
  const auto &scene = require_scene(s);
  if (!s.mission) throw ValidationError("/mission: scenario has no mission section");
  const auto log = dispatch::run_mission(scene, s.mission->config, s.mission->events, s.seed,
                                         s.mission->max_time_s);
  RunResult r;
  r.files.push_back({s.name + "_mission.csv",
                     "# config=" + scenario::resolved_config(s) + '\n' + dispatch::format_log(log)});
  for (const auto &d : log.diagnostics) r.notes.push_back(s.name + ": " + d);
  r.notes.push_back(s.name + ": mission ended in " +
                    std::string(dispatch::to_string(log.final_status.state)) + " at t=" +
                    num(log.final_status.time_s, 1) + " s, battery " +
                    num(log.final_status.battery_fraction, 3));
  return r;
}

RunResult run_acoustics(const Scenario &s0, const RunOptions &opt) {
  const Scenario s = effective(s0, opt);
  const scenario::AcousticsSpec spec = s.acoustics.value_or(scenario::AcousticsSpec{});
  RunResult r;
  Csv levels(s, "distance_m,level_db");
  for (double d : spec.distances_m)
    levels.row(num(d, 2), num(dispatch::acoustic_level(spec.model, d)));
  Csv standoff(s, "threshold_db,min_standoff_m");
  for (double t : spec.thresholds_db)
    standoff.row(num(t, 2), num(dispatch::min_standoff(spec.model, t)));
  r.files.push_back({s.name + "_acoustics.csv", levels.str()});
  r.files.push_back({s.name + "_standoff.csv", standoff.str()});
  return r;
}

RunResult run_all(const Scenario &s, const RunOptions &opt) {
  RunResult r;
  if (s.pattern) r.append(run_pattern(s, opt));
  if (s.coverage) r.append(run_coverage(s, opt));
  if (s.link) r.append(run_link(s, opt));
  if (s.scene) r.append(run_evaluate(s, opt));
  if (s.mission) r.append(run_mission(s, opt));
  if (s.acoustics) r.append(run_acoustics(s, opt));
  return r;
}

std::vector<std::string> reproduce_names() {
  return {"fig3_array",          "eq1_coverage",         "su_field_trial",
          "mu_field_trial_d1_6", "mu_field_trial_d2_10", "acoustics"};
}

RunResult reproduce(const std::string &name, const RunOptions &opt) {
  return run_all(scenario::parse_scenario(scenario::bundled_scenario_text(name)), opt);
}

void write_outputs(const RunResult &r, const std::filesystem::path &dir) {
  std::filesystem::create_directories(dir);
  for (const auto &f : r.files) {
    std::ofstream out(dir / f.name, std::ios::binary | std::ios::trunc);
    out << f.content;
    if (!out) throw std::runtime_error("cannot write " + (dir / f.name).string());
  }
}

} // namespace uavabs::runner
