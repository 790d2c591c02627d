#pragma once

// Multi-beam multi-stream scene evaluation for distributed beamforming
// modules (BFMs) on the UAV and on ground terminals.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "uavabs/array_engine.hpp"
#include "uavabs/channel.hpp"
#include "uavabs/geometry.hpp"

namespace uavabs::multibeam {

inline constexpr double kDefaultPayloadBudgetG = 544.0; // about 1.2 lb
inline constexpr double kDefaultAciRejectionDb = 30.0;
inline constexpr double kUavSeparationFloorWavelengths = 2.0;
inline constexpr double kUavSeparationWarnWavelengths = 4.0;
inline constexpr double kUeSeparationFloorWavelengths = 1.5;
inline constexpr std::size_t kExhaustiveSearchLimit = 6;

struct BfmMount {
  std::string id;
  geometry::MountFrame mount;
  array::ArrayGeometry geom{};
  array::ElementModel model{};
  double weight_g = 1.0;
  std::array<double, 3> dims_mm{25.0, 9.0, 2.0};
  double tx_power_dbm = channel::kDefaultTxPowerDbm;
  double noise_figure_db = channel::kDefaultNoiseFigureDb;
};

struct GroundUe {
  std::string id;
  Vec2 position;
  std::vector<BfmMount> mounts;
};

struct Scene {
  geometry::UavPose uav{};
  std::vector<BfmMount> uav_mounts;
  std::vector<GroundUe> ues;
  channel::ChannelParams channel_params{};
  double payload_budget_g = kDefaultPayloadBudgetG;
  // Extra payload that is not a BFM (logic board, cabling, storage).
  double other_payload_g = 0.0;
  double aci_rejection_db = kDefaultAciRejectionDb;
  double mac_efficiency = channel::kCalibratedMacEfficiency;
  double occupied_bw_hz = channel::kWigigOccupiedBwHz;
  std::vector<int> access_channels{1, 2, 3};
  // Channel held back for backhaul; never used for access links.
  std::optional<int> backhaul_channel;
};

struct Violation {
  std::string rule;
  std::string entities;
  std::string message;
};

// Hard rule violations; empty iff placement, separation, payload and
// population rules hold.
std::vector<Violation> validate_scene(const Scene &scene);
// Soft findings, e.g. UAV module pairs closer than 4 wavelengths.
std::vector<Violation> scene_warnings(const Scene &scene);

// Edge-to-edge gap between two modules, treating each as a sphere of
// its longest dimension.
double edge_gap_m(const BfmMount &a, const Vec3 &pos_a, const BfmMount &b, const Vec3 &pos_b);

struct Link {
  std::size_t uav_bfm = 0; // index into Scene::uav_mounts
  std::size_t ue = 0;      // index into Scene::ues
  std::size_t ue_bfm = 0;  // index into GroundUe::mounts
  int channel = 1;         // WiGig channel index
  array::SteeringCommand uav_steer{};
  array::SteeringCommand ue_steer{};
};

struct Assignment {
  std::vector<Link> links;
  std::string diagnostic;
};

// Builds a link with both ends steered at each other. Throws GeometryError
// when either end sees the other behind its array plane.
Link make_link(const Scene &scene, std::size_t uav_bfm, std::size_t ue, std::size_t ue_bfm,
               int channel);

struct LinkReport {
  std::string link_id;
  int channel = 0;
  bool outage = false;
  std::string note;
  double distance_m = 0.0;
  double tx_gain_dbi = 0.0;
  double rx_gain_dbi = 0.0;
  double signal_dbm = 0.0;
  double interference_dbm = -1e300; // no interferers
  double noise_dbm = 0.0;
  double snr_db = 0.0;
  double sinr_db = 0.0;
  int mcs = 0;
  double phy_rate_bps = 0.0;
  double mac_throughput_bps = 0.0;
};

struct SinrReport {
  std::vector<LinkReport> links;
  double aggregate_bps = 0.0;
};

// Scene with one PhasedArray per distinct (geometry, element) pair and all
// module frames resolved. Evaluating many assignments of one scene through a
// single SceneModel avoids recomputing pattern normalizations.
class SceneModel {
public:
  explicit SceneModel(Scene scene);

  const Scene &scene() const { return scene_; }
  const geometry::AntennaFrame &uav_frame(std::size_t i) const { return uav_frames_[i]; }
  const geometry::AntennaFrame &ue_frame(std::size_t ue, std::size_t bfm) const;
  const array::PhasedArray &uav_array(std::size_t i) const;
  const array::PhasedArray &ue_array(std::size_t ue, std::size_t bfm) const;

private:
  std::size_t intern(const BfmMount &m);

  Scene scene_;
  std::vector<array::PhasedArray> arrays_;
  std::vector<std::size_t> uav_array_idx_;
  std::vector<std::vector<std::size_t>> ue_array_idx_;
  std::vector<geometry::AntennaFrame> uav_frames_;
  std::vector<std::vector<geometry::AntennaFrame>> ue_frames_;
};

// Per-link signal, interference and throughput. Links whose endpoints cannot
// see each other are reported as outage and do not transmit. Shadowing draws
// (when sigma > 0) come from rng in link order.
SinrReport sinr_matrix(const SceneModel &model, const Assignment &assignment,
                       channel::Rng *rng = nullptr);
SinrReport sinr_matrix(const Scene &scene, const Assignment &assignment,
                       channel::Rng *rng = nullptr);

// Objective used by assign_beams: the smallest per-UE MAC throughput (a UE
// without a stream counts as 0), then the aggregate.
struct AssignmentScore {
  double min_ue_bps = 0.0;
  double aggregate_bps = 0.0;
};
AssignmentScore score(const Scene &scene, const SinrReport &report, const Assignment &assignment);

// Max-min stream assignment. Exhaustive over matchings and channels for up to
// six modules per side, greedy beyond. Candidates with any stream in outage
// are discarded; ties go to the lexicographically smallest link list
// (uav module, UE, UE module, channel).
Assignment assign_beams(const Scene &scene);

// Tx gain lost on each link when the UAV drifts horizontally by drift_m
// without re-steering. With no direction given, the worst of 36 headings.
std::vector<double> drift_tolerance(const Scene &scene, const Assignment &assignment,
                                    double drift_m,
                                    std::optional<double> direction_deg = std::nullopt);

std::string link_id(const Scene &scene, const Link &link);

} // namespace uavabs::multibeam
