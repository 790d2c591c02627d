#include "uavabs/multibeam.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace uavabs::multibeam {

namespace {

Vec3 ue_base(const GroundUe &ue) { return {ue.position.x, ue.position.y, 0.0}; }

double longest_dim_m(const BfmMount &m) {
  return *std::max_element(m.dims_mm.begin(), m.dims_mm.end()) / 1000.0;
}

double larger_wavelength(const BfmMount &a, const BfmMount &b) {
  return std::max(wavelength_m(a.geom.carrier_hz), wavelength_m(b.geom.carrier_hz));
}

bool same_array(const BfmMount &m, const array::PhasedArray &arr) {
  const auto &g = arr.geometry();
  const auto &e = arr.element();
  return g.n_elev == m.geom.n_elev && g.n_azim == m.geom.n_azim &&
         g.spacing_wavelengths == m.geom.spacing_wavelengths &&
         g.carrier_hz == m.geom.carrier_hz && g.phase_bits == m.geom.phase_bits &&
         e.exponent_q == m.model.exponent_q && e.back_lobe_floor_db == m.model.back_lobe_floor_db;
}

void check_separation(const std::vector<BfmMount> &mounts, const std::vector<Vec3> &positions,
                      double floor_wl, const std::string &owner, const std::string &rule,
                      std::vector<Violation> &out) {
  for (std::size_t i = 0; i < mounts.size(); ++i) {
    for (std::size_t j = i + 1; j < mounts.size(); ++j) {
      const double gap = edge_gap_m(mounts[i], positions[i], mounts[j], positions[j]);
      const double lambda = larger_wavelength(mounts[i], mounts[j]);
      if (gap < floor_wl * lambda) {
        std::ostringstream msg;
        msg << "edge-to-edge gap " << gap * 1000.0 << " mm is below " << floor_wl
            << " wavelengths (" << floor_wl * lambda * 1000.0 << " mm)";
        out.push_back({rule, owner + ":" + mounts[i].id + "," + mounts[j].id, msg.str()});
      }
    }
  }
}

std::vector<Vec3> uav_mount_positions(const Scene &scene) {
  std::vector<Vec3> out;
  for (const auto &m : scene.uav_mounts)
    out.push_back(geometry::uav_module_frame(scene.uav, m.mount).origin);
  return out;
}

std::vector<Vec3> ue_mount_positions(const GroundUe &ue) {
  std::vector<Vec3> out;
  for (const auto &m : ue.mounts) out.push_back(geometry::fixed_module_frame(ue_base(ue), m.mount).origin);
  return out;
}

} // namespace

double edge_gap_m(const BfmMount &a, const Vec3 &pos_a, const BfmMount &b, const Vec3 &pos_b) {
  return (pos_a - pos_b).norm() - 0.5 * (longest_dim_m(a) + longest_dim_m(b));
}

std::vector<Violation> validate_scene(const Scene &scene) {
  std::vector<Violation> out;
  if (scene.uav_mounts.empty())
    out.push_back({"uav-bfm-count", "uav", "UAV carries no beamforming module (N_BF >= 1)"});
  if (scene.ues.empty()) out.push_back({"no-users", "scene", "no users in scene"});

  std::set<std::string> ids;
  for (const auto &m : scene.uav_mounts)
    if (!ids.insert(m.id).second) out.push_back({"duplicate-id", m.id, "duplicate UAV module id"});
  std::set<std::string> ue_ids;
  for (const auto &ue : scene.ues) {
    if (!ue_ids.insert(ue.id).second) out.push_back({"duplicate-id", ue.id, "duplicate UE id"});
    if (ue.mounts.empty()) out.push_back({"ue-bfm-count", ue.id, "UE has no beamforming module"});
  }

  try {
    scene.uav.validate();
    check_separation(scene.uav_mounts, uav_mount_positions(scene), kUavSeparationFloorWavelengths,
                     "uav", "uav-separation", out);
  } catch (const InvalidArgument &e) {
    out.push_back({"uav-pose", "uav", e.what()});
  }
  for (const auto &ue : scene.ues)
    check_separation(ue.mounts, ue_mount_positions(ue), kUeSeparationFloorWavelengths, ue.id,
                     "ue-separation", out);

  double mass = scene.other_payload_g;
  for (const auto &m : scene.uav_mounts) mass += m.weight_g;
  if (mass > scene.payload_budget_g) {
    std::ostringstream msg;
    msg << "extra payload " << mass << " g exceeds budget " << scene.payload_budget_g << " g";
    out.push_back({"payload", "uav", msg.str()});
  }

  for (const auto *mounts : {&scene.uav_mounts}) {
    for (const auto &m : *mounts) {
      try {
        m.geom.validate();
        m.model.validate();
      } catch (const InvalidArgument &e) {
        out.push_back({"bfm-config", m.id, e.what()});
      }
    }
  }
  for (const auto &ue : scene.ues) {
    for (const auto &m : ue.mounts) {
      try {
        m.geom.validate();
        m.model.validate();
      } catch (const InvalidArgument &e) {
        out.push_back({"bfm-config", ue.id + ":" + m.id, e.what()});
      }
    }
  }
  for (int ch : scene.access_channels)
    if (ch < 1 || ch > 3) out.push_back({"channel", "scene", "access channel outside 1..3"});
  if (scene.backhaul_channel && (*scene.backhaul_channel < 1 || *scene.backhaul_channel > 3))
    out.push_back({"channel", "scene", "backhaul channel outside 1..3"});
  return out;
}

std::vector<Violation> scene_warnings(const Scene &scene) {
  std::vector<Violation> warn;
  if (scene.uav_mounts.size() < 2) return warn;
  try {
    check_separation(scene.uav_mounts, uav_mount_positions(scene), kUavSeparationWarnWavelengths,
                     "uav", "uav-separation-margin", warn);
  } catch (const InvalidArgument &) {
  }
  return warn;
}

std::string link_id(const Scene &scene, const Link &link) {
  return scene.uav_mounts.at(link.uav_bfm).id + "->" + scene.ues.at(link.ue).id + ":" +
         scene.ues.at(link.ue).mounts.at(link.ue_bfm).id;
}

Link make_link(const Scene &scene, std::size_t uav_bfm, std::size_t ue, std::size_t ue_bfm,
               int channel) {
  const auto a = geometry::uav_module_frame(scene.uav, scene.uav_mounts.at(uav_bfm).mount);
  const auto &g = scene.ues.at(ue);
  const auto b = geometry::fixed_module_frame(ue_base(g), g.mounts.at(ue_bfm).mount);
  Link l;
  l.uav_bfm = uav_bfm;
  l.ue = ue;
  l.ue_bfm = ue_bfm;
  l.channel = channel;
  l.uav_steer = geometry::steering_toward(a, b.origin);
  l.ue_steer = geometry::steering_toward(b, a.origin);
  return l;
}

SceneModel::SceneModel(Scene scene) : scene_(std::move(scene)) {
  for (const auto &m : scene_.uav_mounts) {
    uav_array_idx_.push_back(intern(m));
    uav_frames_.push_back(geometry::uav_module_frame(scene_.uav, m.mount));
  }
  for (const auto &ue : scene_.ues) {
    auto &idx = ue_array_idx_.emplace_back();
    auto &frames = ue_frames_.emplace_back();
    for (const auto &m : ue.mounts) {
      idx.push_back(intern(m));
      frames.push_back(geometry::fixed_module_frame(ue_base(ue), m.mount));
    }
  }
}

std::size_t SceneModel::intern(const BfmMount &m) {
  for (std::size_t i = 0; i < arrays_.size(); ++i)
    if (same_array(m, arrays_[i])) return i;
  arrays_.emplace_back(m.geom, m.model);
  return arrays_.size() - 1;
}

const geometry::AntennaFrame &SceneModel::ue_frame(std::size_t ue, std::size_t bfm) const {
  return ue_frames_.at(ue).at(bfm);
}
const array::PhasedArray &SceneModel::uav_array(std::size_t i) const {
  return arrays_[uav_array_idx_.at(i)];
}
const array::PhasedArray &SceneModel::ue_array(std::size_t ue, std::size_t bfm) const {
  return arrays_[ue_array_idx_.at(ue).at(bfm)];
}

namespace {

void check_assignment(const Scene &scene, const Assignment &asg) {
  std::set<std::size_t> uav_used;
  std::set<std::pair<std::size_t, std::size_t>> ue_used;
  for (const auto &l : asg.links) {
    require(l.uav_bfm < scene.uav_mounts.size(), "link references unknown UAV module");
    require(l.ue < scene.ues.size(), "link references unknown UE");
    require(l.ue_bfm < scene.ues[l.ue].mounts.size(), "link references unknown UE module");
    require(l.channel >= 1 && l.channel <= 3, "link channel outside 1..3");
    require(!scene.backhaul_channel || *scene.backhaul_channel != l.channel,
            "link uses the reserved backhaul channel");
    require(uav_used.insert(l.uav_bfm).second, "UAV module carries more than one stream");
    require(ue_used.insert({l.ue, l.ue_bfm}).second, "UE module carries more than one stream");
  }
}

bool faces(const geometry::AntennaFrame &f, const Vec3 &target) {
  const Vec3 local = f.to_local(target - f.origin);
  return local.x > 1e-12 * local.norm();
}

} // namespace

SinrReport sinr_matrix(const SceneModel &model, const Assignment &asg, channel::Rng *rng) {
  const Scene &scene = model.scene();
  check_assignment(scene, asg);
  const auto &params = scene.channel_params;

  struct Endpoint {
    const geometry::AntennaFrame *tx;
    const geometry::AntennaFrame *rx;
    std::optional<array::SteeredBeam> tx_beam;
    std::optional<array::SteeredBeam> rx_beam;
    double tx_power_dbm;
    double carrier_hz;
  };
  std::vector<Endpoint> ends;
  SinrReport report;

  for (const auto &l : asg.links) {
    const auto &ue_mount = scene.ues[l.ue].mounts[l.ue_bfm];
    const auto ch = channel::WigigChannel::from_index(l.channel, scene.occupied_bw_hz);
    Endpoint e{&model.uav_frame(l.uav_bfm), &model.ue_frame(l.ue, l.ue_bfm), std::nullopt,
               std::nullopt, scene.uav_mounts[l.uav_bfm].tx_power_dbm, ch.center_hz};

    LinkReport r;
    r.link_id = link_id(scene, l);
    r.channel = l.channel;
    r.noise_dbm = channel::noise_floor_dbm(scene.occupied_bw_hz, ue_mount.noise_figure_db);
    r.distance_m = (e.rx->origin - e.tx->origin).norm();
    if (!faces(*e.tx, e.rx->origin) || !faces(*e.rx, e.tx->origin)) {
      r.outage = true;
      r.note = "unservable: endpoint behind an array plane";
    } else if (r.distance_m < 1.0) {
      r.outage = true;
      r.note = "unservable: inside 1 m reference distance";
    } else {
      e.tx_beam = model.uav_array(l.uav_bfm).steer(l.uav_steer);
      e.rx_beam = model.ue_array(l.ue, l.ue_bfm).steer(l.ue_steer);
      r.tx_gain_dbi = e.tx_beam->gain_dbi(e.tx->to_local(e.rx->origin - e.tx->origin));
      r.rx_gain_dbi = e.rx_beam->gain_dbi(e.rx->to_local(e.tx->origin - e.rx->origin));
      r.signal_dbm = e.tx_power_dbm + r.tx_gain_dbi + r.rx_gain_dbi -
                     channel::path_loss_db(params, r.distance_m, e.carrier_hz, rng);
      r.snr_db = r.signal_dbm - r.noise_dbm;
    }
    ends.push_back(std::move(e));
    report.links.push_back(std::move(r));
  }

  for (std::size_t i = 0; i < ends.size(); ++i) {
    auto &r = report.links[i];
    if (r.outage) continue;
    double interference_mw = 0.0;
    for (std::size_t k = 0; k < ends.size(); ++k) {
      if (k == i || report.links[k].outage) continue;
      const auto &src = ends[k];
      const auto &victim = ends[i];
      const double d = std::max(1.0, (victim.rx->origin - src.tx->origin).norm());
      double p = src.tx_power_dbm +
                 src.tx_beam->gain_dbi(src.tx->to_local(victim.rx->origin - src.tx->origin)) +
                 victim.rx_beam->gain_dbi(victim.rx->to_local(src.tx->origin - victim.rx->origin)) -
                 channel::path_loss_db(params, d, src.carrier_hz, rng);
      if (report.links[k].channel != r.channel) p -= scene.aci_rejection_db;
      interference_mw += db_to_linear(p);
    }
    if (interference_mw > 0.0) r.interference_dbm = linear_to_db(interference_mw);
    r.sinr_db = r.signal_dbm - linear_to_db(interference_mw + db_to_linear(r.noise_dbm));
    r.mcs = channel::select_mcs(r.sinr_db);
    r.phy_rate_bps = channel::mcs_rate(r.sinr_db);
    r.mac_throughput_bps = channel::mac_throughput(r.phy_rate_bps, scene.mac_efficiency);
    if (r.mcs == 0) {
      r.outage = true;
      r.note = "SINR below lowest MCS threshold";
    }
  }
  for (const auto &r : report.links) report.aggregate_bps += r.mac_throughput_bps;
  return report;
}

SinrReport sinr_matrix(const Scene &scene, const Assignment &asg, channel::Rng *rng) {
  return sinr_matrix(SceneModel(scene), asg, rng);
}

AssignmentScore score(const Scene &scene, const SinrReport &report, const Assignment &asg) {
  std::vector<double> per_ue(scene.ues.size(), 0.0);
  AssignmentScore s;
  for (std::size_t i = 0; i < asg.links.size(); ++i) {
    per_ue.at(asg.links[i].ue) += report.links.at(i).mac_throughput_bps;
    s.aggregate_bps += report.links[i].mac_throughput_bps;
  }
  s.min_ue_bps = per_ue.empty() ? 0.0 : *std::min_element(per_ue.begin(), per_ue.end());
  return s;
}

namespace {

constexpr double kScoreTieBps = 1e-3;

// Precomputed gains and losses for every (UAV module, UE module) pairing so a
// candidate assignment costs O(links^2) arithmetic.
class SearchTables {
public:
  explicit SearchTables(const Scene &scene) : model_(scene), scene_(model_.scene()) {
    for (std::size_t u = 0; u < scene_.ues.size(); ++u)
      for (std::size_t b = 0; b < scene_.ues[u].mounts.size(); ++b) ue_mods_.push_back({u, b});
    for (int ch : scene_.access_channels)
      if (!scene_.backhaul_channel || *scene_.backhaul_channel != ch) channels_.push_back(ch);
    std::sort(channels_.begin(), channels_.end());
    channels_.erase(std::unique(channels_.begin(), channels_.end()), channels_.end());

    const std::size_t na = scene_.uav_mounts.size();
    const std::size_t nb = ue_mods_.size();
    servable_.assign(na * nb, false);
    tx_gain_.assign(na * nb * nb, 0.0);
    rx_gain_.assign(nb * na * na, 0.0);
    dist_.assign(na * nb, 0.0);
    steer_.resize(na * nb);

    std::vector<std::optional<array::SteeredBeam>> tx_beam(na * nb), rx_beam(na * nb);
    for (std::size_t a = 0; a < na; ++a) {
      for (std::size_t b = 0; b < nb; ++b) {
        const auto &fa = model_.uav_frame(a);
        const auto &fb = model_.ue_frame(ue_mods_[b].first, ue_mods_[b].second);
        dist_[a * nb + b] = std::max(1.0, (fa.origin - fb.origin).norm());
        if (!faces(fa, fb.origin) || !faces(fb, fa.origin) || (fa.origin - fb.origin).norm() < 1.0)
          continue;
        servable_[a * nb + b] = true;
        const auto link = make_link(scene_, a, ue_mods_[b].first, ue_mods_[b].second, 1);
        steer_[a * nb + b] = link;
        tx_beam[a * nb + b] = model_.uav_array(a).steer(link.uav_steer);
        rx_beam[a * nb + b] =
            model_.ue_array(ue_mods_[b].first, ue_mods_[b].second).steer(link.ue_steer);
      }
    }
    for (std::size_t a = 0; a < na; ++a) {
      const auto &fa = model_.uav_frame(a);
      for (std::size_t bt = 0; bt < nb; ++bt) {
        if (!tx_beam[a * nb + bt]) continue;
        for (std::size_t bv = 0; bv < nb; ++bv) {
          const auto &fv = model_.ue_frame(ue_mods_[bv].first, ue_mods_[bv].second);
          tx_gain_[(a * nb + bt) * nb + bv] =
              tx_beam[a * nb + bt]->gain_dbi(fa.to_local(fv.origin - fa.origin));
        }
      }
    }
    for (std::size_t b = 0; b < nb; ++b) {
      const auto &fb = model_.ue_frame(ue_mods_[b].first, ue_mods_[b].second);
      for (std::size_t at = 0; at < na; ++at) {
        if (!rx_beam[at * nb + b]) continue;
        for (std::size_t ai = 0; ai < na; ++ai) {
          const auto &fi = model_.uav_frame(ai);
          rx_gain_[(b * na + at) * na + ai] =
              rx_beam[at * nb + b]->gain_dbi(fb.to_local(fi.origin - fb.origin));
        }
      }
    }
    auto params = scene_.channel_params;
    params.shadow_sigma_db = 0.0;
    path_loss_.assign(na * nb * 3, 0.0);
    for (std::size_t a = 0; a < na; ++a)
      for (std::size_t b = 0; b < nb; ++b)
        for (int ch = 1; ch <= 3; ++ch)
          path_loss_[(a * nb + b) * 3 + static_cast<std::size_t>(ch - 1)] = channel::path_loss_db(
              params, dist_[a * nb + b], channel::kWigigCentersHz[static_cast<std::size_t>(ch - 1)]);
    for (std::size_t b = 0; b < nb; ++b) {
      const auto &m = scene_.ues[ue_mods_[b].first].mounts[ue_mods_[b].second];
      noise_dbm_.push_back(channel::noise_floor_dbm(scene_.occupied_bw_hz, m.noise_figure_db));
    }
  }

  struct Cand {
    std::size_t a;
    std::size_t b;
    int ch;
  };

  // Returns nullopt when any stream is in outage.
  std::optional<AssignmentScore> evaluate(const std::vector<Cand> &cands) const {
    const std::size_t na = scene_.uav_mounts.size();
    const std::size_t nb = ue_mods_.size();
    std::vector<double> per_ue(scene_.ues.size(), 0.0);
    AssignmentScore s;
    for (const auto &c : cands) {
      const double signal = scene_.uav_mounts[c.a].tx_power_dbm +
                            tx_gain_[(c.a * nb + c.b) * nb + c.b] +
                            rx_gain_[(c.b * na + c.a) * na + c.a] - pl(c.a, c.b, c.ch);
      double interference_mw = 0.0;
      for (const auto &k : cands) {
        if (&k == &c) continue;
        double p = scene_.uav_mounts[k.a].tx_power_dbm + tx_gain_[(k.a * nb + k.b) * nb + c.b] +
                   rx_gain_[(c.b * na + c.a) * na + k.a] - pl(k.a, c.b, k.ch);
        if (k.ch != c.ch) p -= scene_.aci_rejection_db;
        interference_mw += db_to_linear(p);
      }
      const double sinr =
          signal - linear_to_db(interference_mw + db_to_linear(noise_dbm_[c.b]));
      const double phy = channel::mcs_rate(sinr);
      if (phy <= 0.0) return std::nullopt;
      const double mac = channel::mac_throughput(phy, scene_.mac_efficiency);
      per_ue[ue_mods_[c.b].first] += mac;
      s.aggregate_bps += mac;
    }
    s.min_ue_bps = *std::min_element(per_ue.begin(), per_ue.end());
    return s;
  }

  bool servable(std::size_t a, std::size_t b) const {
    return servable_[a * ue_mods_.size() + b];
  }
  std::size_t n_uav() const { return scene_.uav_mounts.size(); }
  std::size_t n_ue_mods() const { return ue_mods_.size(); }
  const std::vector<int> &channels() const { return channels_; }

  Assignment to_assignment(const std::vector<Cand> &cands) const {
    Assignment asg;
    for (const auto &c : cands) {
      Link l = steer_[c.a * ue_mods_.size() + c.b];
      l.channel = c.ch;
      asg.links.push_back(l);
    }
    return asg;
  }

  // Lexicographic key of a candidate list in (uav, ue, ue module, channel) order.
  std::vector<std::array<std::size_t, 4>> key(std::vector<Cand> cands) const {
    std::vector<std::array<std::size_t, 4>> k;
    for (const auto &c : cands)
      k.push_back({c.a, ue_mods_[c.b].first, ue_mods_[c.b].second, static_cast<std::size_t>(c.ch)});
    std::sort(k.begin(), k.end());
    return k;
  }

private:
  double pl(std::size_t a, std::size_t b, int ch) const {
    return path_loss_[(a * ue_mods_.size() + b) * 3 + static_cast<std::size_t>(ch - 1)];
  }

  SceneModel model_;
  const Scene &scene_;
  std::vector<std::pair<std::size_t, std::size_t>> ue_mods_;
  std::vector<int> channels_;
  std::vector<bool> servable_;
  std::vector<double> tx_gain_;
  std::vector<double> rx_gain_;
  std::vector<double> dist_;
  std::vector<double> path_loss_;
  std::vector<double> noise_dbm_;
  std::vector<Link> steer_;
};

// True when (s, k) beats (best_s, best_k).
bool better(const AssignmentScore &s, const std::vector<std::array<std::size_t, 4>> &k,
            const std::optional<AssignmentScore> &best_s,
            const std::vector<std::array<std::size_t, 4>> &best_k) {
  if (!best_s) return true;
  if (s.min_ue_bps > best_s->min_ue_bps + kScoreTieBps) return true;
  if (s.min_ue_bps < best_s->min_ue_bps - kScoreTieBps) return false;
  if (s.aggregate_bps > best_s->aggregate_bps + kScoreTieBps) return true;
  if (s.aggregate_bps < best_s->aggregate_bps - kScoreTieBps) return false;
  return k < best_k;
}

} // namespace

Assignment assign_beams(const Scene &scene) {
  std::size_t ue_mods = 0;
  for (const auto &ue : scene.ues) ue_mods += ue.mounts.size();
  require(!scene.uav_mounts.empty() && ue_mods > 0,
          "assignment needs at least one UAV module and one UE module");

  const SearchTables t(scene);
  using Cand = SearchTables::Cand;
  std::optional<AssignmentScore> best;
  std::vector<std::array<std::size_t, 4>> best_key;
  std::vector<Cand> best_cands;

  auto consider = [&](const std::vector<Cand> &cands) {
    if (cands.empty()) return false;
    const auto s = t.evaluate(cands);
    if (!s) return false;
    auto k = t.key(cands);
    if (better(*s, k, best, best_key)) {
      best = s;
      best_key = std::move(k);
      best_cands = cands;
      return true;
    }
    return false;
  };

  if (t.n_uav() <= kExhaustiveSearchLimit && t.n_ue_mods() <= kExhaustiveSearchLimit) {
    std::vector<Cand> cur;
    std::vector<bool> used(t.n_ue_mods(), false);
    std::function<void(std::size_t)> dfs = [&](std::size_t a) {
      if (a == t.n_uav()) {
        consider(cur);
        return;
      }
      dfs(a + 1); // module a idle
      for (std::size_t b = 0; b < t.n_ue_mods(); ++b) {
        if (used[b] || !t.servable(a, b)) continue;
        used[b] = true;
        for (int ch : t.channels()) {
          cur.push_back({a, b, ch});
          dfs(a + 1);
          cur.pop_back();
        }
        used[b] = false;
      }
    };
    dfs(0);
  } else {
    // Greedy: add the single stream that most improves the objective.
    std::vector<Cand> cur;
    std::vector<bool> a_used(t.n_uav(), false), b_used(t.n_ue_mods(), false);
    for (;;) {
      std::optional<Cand> pick;
      for (std::size_t a = 0; a < t.n_uav(); ++a) {
        if (a_used[a]) continue;
        for (std::size_t b = 0; b < t.n_ue_mods(); ++b) {
          if (b_used[b] || !t.servable(a, b)) continue;
          for (int ch : t.channels()) {
            cur.push_back({a, b, ch});
            if (consider(cur)) pick = cur.back();
            cur.pop_back();
          }
        }
      }
      if (!pick) break;
      cur.push_back(*pick);
      a_used[pick->a] = true;
      b_used[pick->b] = true;
    }
  }

  if (!best) {
    Assignment empty;
    empty.diagnostic = "no feasible link: every candidate stream is unservable or in outage";
    return empty;
  }
  std::sort(best_cands.begin(), best_cands.end(),
            [](const Cand &x, const Cand &y) { return x.a < y.a; });
  return t.to_assignment(best_cands);
}

std::vector<double> drift_tolerance(const Scene &scene, const Assignment &asg, double drift_m,
                                    std::optional<double> direction_deg) {
  require(std::isfinite(drift_m) && drift_m >= 0.0, "drift must be >= 0");
  check_assignment(scene, asg);
  const SceneModel model(scene);
  std::vector<double> out;
  for (const auto &l : asg.links) {
    const auto beam = model.uav_array(l.uav_bfm).steer(l.uav_steer);
    const auto &mount = scene.uav_mounts[l.uav_bfm].mount;
    const Vec3 target = model.ue_frame(l.ue, l.ue_bfm).origin;
    const auto f0 = geometry::uav_module_frame(scene.uav, mount);
    const double g0 = beam.gain_dbi(f0.to_local(target - f0.origin));

    auto penalty_toward = [&](double dir_deg) {
      geometry::UavPose moved = scene.uav;
      moved.position.x += drift_m * std::cos(deg2rad(dir_deg));
      moved.position.y += drift_m * std::sin(deg2rad(dir_deg));
      const auto f1 = geometry::uav_module_frame(moved, mount);
      return g0 - beam.gain_dbi(f1.to_local(target - f1.origin));
    };
    if (direction_deg) {
      out.push_back(penalty_toward(*direction_deg));
    } else {
      double worst = 0.0;
      for (int k = 0; k < 36; ++k) worst = std::max(worst, penalty_toward(10.0 * k));
      out.push_back(worst);
    }
  }
  return out;
}

} // namespace uavabs::multibeam
