#pragma once

// Scenario documents (JSON): parsing with strict key checking, defaults and
// the resolved-config dump.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "uavabs/dispatch.hpp"

namespace uavabs::scenario {

// Malformed or inconsistent scenario input. what() starts with the line
// and column (syntax errors) or the JSON pointer of the offending field.
class ValidationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct PatternSpec {
  array::SteeringCommand steer{};
  double az_step_deg = array::kDefaultGridStepDeg;
  double el_step_deg = array::kDefaultGridStepDeg;
  double cut_step_deg = array::kDefaultCutStepDeg;
  bool write_grid = false;
};

struct CoverageSpec {
  std::vector<double> heights_m{10.0};
  std::vector<double> alphas_deg{50.0};
  // Unset: taken from the array's computed elevation HPBW.
  std::optional<double> hpbw_e_deg;
};

struct ChannelSpec {
  channel::ChannelParams params{};
  double occupied_bw_hz = channel::kWigigOccupiedBwHz;
  double mac_efficiency = channel::kCalibratedMacEfficiency;
  double aci_rejection_db = multibeam::kDefaultAciRejectionDb;
  std::vector<int> access_channels{1, 2, 3};
  std::optional<int> backhaul_channel;
  // Defaults for modules and link sweeps that do not set their own.
  double tx_power_dbm = channel::kDefaultTxPowerDbm;
  double noise_figure_db = channel::kDefaultNoiseFigureDb;
};

struct LinkSpec {
  std::vector<double> distances_m;
  // Unset: broadside peak gain of the scenario array.
  std::optional<double> tx_gain_dbi;
  std::optional<double> rx_gain_dbi;
  int channel = 2;
  double tx_power_dbm = channel::kDefaultTxPowerDbm;
  double noise_figure_db = channel::kDefaultNoiseFigureDb;
};

struct MuLayoutSpec {
  double d0_m = 22.0;
  double d1_m = 6.0;
  double d2_m = 0.0;
};

struct MissionSpec {
  dispatch::MissionConfig config{};
  std::vector<dispatch::MissionEvent> events;
  double max_time_s = 600.0;
};

struct AcousticFit {
  double distance_m = 10.0;
  double level_db = 66.0;
};

struct AcousticsSpec {
  dispatch::AcousticModel model{};
  // When set, the excess attenuation is solved from this second point.
  std::optional<AcousticFit> fit;
  std::vector<double> thresholds_db{85.0};
  std::vector<double> distances_m{1.0, 2.0, 5.0, 10.0, 20.0};
};

struct Scenario {
  std::string name = "scenario";
  std::uint64_t seed = 1;
  array::ArrayGeometry array{};
  array::ElementModel element{};
  ChannelSpec channel{};
  std::optional<PatternSpec> pattern;
  std::optional<CoverageSpec> coverage;
  std::optional<LinkSpec> link;
  // Present when the document has a "uav" section.
  std::optional<multibeam::Scene> scene;
  std::optional<MuLayoutSpec> mu_layout;
  std::optional<MissionSpec> mission;
  std::optional<AcousticsSpec> acoustics;
  std::string out_dir = "out";
};

Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path &path);

// Every field with defaults filled in. Parsing the result yields the same
// scenario.
std::string resolved_config(const Scenario &s, int indent = -1);

std::vector<std::string> bundled_scenario_names();
// Throws ValidationError for an unknown name.
std::string_view bundled_scenario_text(std::string_view name);

} // namespace uavabs::scenario
