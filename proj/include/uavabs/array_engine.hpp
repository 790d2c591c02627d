#pragma once

// Far-field model of a uniform rectangular phased array.
//
// Local antenna frame: +x is array boresight, the azimuth element rows run
// along +y and the elevation element columns along +z. A look direction
// (az, el) in degrees maps to the unit vector
//   u = (cos el cos az, cos el sin az, sin el).

#include <complex>
#include <optional>
#include <vector>

#include "uavabs/common.hpp"

namespace uavabs::array {

// Element exponent chosen once so that the 2x8 half-wave broadside array
// matches the reported peak gain, elevation beamwidth and side-lobe level
// together (see README, "Calibrated constants").
inline constexpr double kCalibratedElementExponent = 0.75;
inline constexpr double kDefaultBackLobeFloorDb = -20.0;
// Realized gain values are clamped here so exact nulls stay finite.
inline constexpr double kGainFloorDbi = -200.0;

struct ArrayGeometry {
  int n_elev = 2;
  int n_azim = 8;
  double spacing_wavelengths = 0.5;
  double carrier_hz = 62.5e9;
  // 0 means ideal continuous phase shifters.
  int phase_bits = 0;

  void validate() const;
  int element_count() const { return n_elev * n_azim; }
};

struct ElementModel {
  double exponent_q = kCalibratedElementExponent;
  double back_lobe_floor_db = kDefaultBackLobeFloorDb;

  void validate() const;
};

struct SteeringCommand {
  double azimuth_deg = 0.0;
  double elevation_deg = 0.0;

  void validate() const;
};

// Unit vector for a local (az, el) look direction.
Vec3 direction_from_angles(double az_deg, double el_deg);

// Complex phasor sum over all elements with progressive phase matched to the
// steering command. |AF| <= n_elev * n_azim.
std::complex<double> array_factor(const ArrayGeometry &geom, const SteeringCommand &steer,
                                  double az_deg, double el_deg);

// Element power pattern cos^q(off-boresight angle), normalized so the front
// hemisphere integrates to 4*pi. Peak is 10*log10(2*(q+1)) dBi. Behind the
// array plane (and wherever cos^q drops below it in front) the pattern sits
// at back_lobe_floor_db relative to the peak.
double element_gain_dbi(const ElementModel &model, double az_deg, double el_deg);

class SteeredBeam;

// Array geometry plus element model with the steering-independent part of the
// realized-gain normalization precomputed. For ideal phase shifters
//   |AF|^2 = sum_{p,r} (N-|p|)(M-|r|) cos(kd p (u_y - s_y) + kd r (u_z - s_z)),
// so the spherical integral of element * |AF|^2 reduces to a table of
// integrals J(p, r) = int elem(u) cos(kd p u_y) cos(kd r u_z) dOmega that is
// shared by every steering command.
class PhasedArray {
public:
  static constexpr double kDefaultNormStepDeg = 0.5;

  PhasedArray(ArrayGeometry geom, ElementModel model,
              double norm_step_deg = kDefaultNormStepDeg);

  // Spherical integral of element * |AF|^2 for a steering command.
  double raw_power_integral(const SteeringCommand &steer) const;
  SteeredBeam steer(const SteeringCommand &steer) const;

  const ArrayGeometry &geometry() const { return geom_; }
  const ElementModel &element() const { return model_; }

private:
  ArrayGeometry geom_;
  ElementModel model_;
  double norm_step_deg_;
  std::vector<double> j_table_; // j_table_[p * n_elev + r]
};

// A steered array with its realized-gain normalization resolved, so the gain
// toward any direction is a cheap lookup.
class SteeredBeam {
public:
  SteeredBeam(ArrayGeometry geom, ElementModel model, SteeringCommand steer,
              double norm_step_deg = PhasedArray::kDefaultNormStepDeg);

  double gain_linear(double az_deg, double el_deg) const;
  double gain_dbi(double az_deg, double el_deg) const;
  // Gain toward a direction given in the local antenna frame (need not be unit).
  double gain_dbi(const Vec3 &local_dir) const;

  // Element power times |AF|^2, before normalization.
  double raw(double az_deg, double el_deg) const;

  // Main-lobe peak by pattern search started at the steering direction.
  struct Peak {
    double az_deg;
    double el_deg;
    double gain_dbi;
  };
  Peak peak() const;

  const ArrayGeometry &geometry() const { return geom_; }
  const ElementModel &element() const { return model_; }
  const SteeringCommand &steering() const { return steer_; }

private:
  friend class PhasedArray;
  SteeredBeam(const PhasedArray &array, SteeringCommand steer);

  ArrayGeometry geom_;
  ElementModel model_;
  SteeringCommand steer_;
  double norm_ = 1.0;
};

struct PatternCut {
  std::vector<double> angle_deg;
  std::vector<double> gain_dbi;
};

struct RadiationPattern {
  double az_step_deg = 1.0;
  double el_step_deg = 1.0;
  std::vector<double> azimuth_deg;   // -180 <= az < 180
  std::vector<double> elevation_deg; // -90 <= el <= 90
  // grid[i_az * elevation_deg.size() + i_el]
  std::vector<double> grid_dbi;

  // Principal cuts through the refined main-lobe peak.
  double cut_azimuth_deg = 0.0;   // azimuth of the elevation cut
  double cut_elevation_deg = 0.0; // elevation of the azimuth cut
  PatternCut azimuth_cut;         // az in [-180, 180]
  PatternCut elevation_cut;       // el in [-90, 90]

  double at(std::size_t i_az, std::size_t i_el) const {
    return grid_dbi[i_az * elevation_deg.size() + i_el];
  }
};

struct PatternStats {
  double peak_gain_dbi = 0.0;
  double peak_azimuth_deg = 0.0;
  double peak_elevation_deg = 0.0;
  std::optional<double> hpbw_azimuth_deg;
  std::optional<double> hpbw_elevation_deg;
  std::optional<double> sll_azimuth_db;
  std::optional<double> sll_elevation_db;
  std::optional<double> sll_db; // worst of the two cuts
};

inline constexpr double kDefaultGridStepDeg = 1.0;
inline constexpr double kDefaultCutStepDeg = 0.25;
inline constexpr double kMaxStepDeg = 5.0;

RadiationPattern compute_pattern(const ArrayGeometry &geom, const ElementModel &model,
                                 const SteeringCommand &steer,
                                 double az_step_deg = kDefaultGridStepDeg,
                                 double el_step_deg = kDefaultGridStepDeg,
                                 double cut_step_deg = kDefaultCutStepDeg);

PatternStats pattern_stats(const RadiationPattern &p);

// Half-power beamwidth and side-lobe level of a single cut. Exposed for
// callers that build their own cuts.
std::optional<double> cut_hpbw_deg(const PatternCut &cut);
std::optional<double> cut_sll_db(const PatternCut &cut);

// Broadside peak gain minus steered peak gain, dB.
double scan_loss_db(const ArrayGeometry &geom, const ElementModel &model,
                    const SteeringCommand &steer);

// Spherical integral of linear gain over a midpoint grid. Used by the
// normalization and exposed for diagnostics.
template <typename GainFn>
double integrate_sphere(GainFn &&gain_linear, double step_deg) {
  const double step = deg2rad(step_deg);
  const int n_az = static_cast<int>(std::lround(360.0 / step_deg));
  const int n_el = static_cast<int>(std::lround(180.0 / step_deg));
  double sum = 0.0;
  for (int j = 0; j < n_el; ++j) {
    const double el = -90.0 + (j + 0.5) * step_deg;
    const double w = std::cos(deg2rad(el));
    double row = 0.0;
    for (int i = 0; i < n_az; ++i) row += gain_linear(-180.0 + (i + 0.5) * step_deg, el);
    sum += row * w;
  }
  return sum * step * step;
}

} // namespace uavabs::array
