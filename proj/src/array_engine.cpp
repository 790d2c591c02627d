#include "uavabs/array_engine.hpp"

#include <algorithm>
#include <array>

namespace uavabs::array {

void ArrayGeometry::validate() const {
  require(n_elev >= 1 && n_azim >= 1, "array element counts must be >= 1");
  require(std::isfinite(spacing_wavelengths) && spacing_wavelengths > 0.0,
          "element spacing must be > 0 wavelengths");
  require(std::isfinite(carrier_hz) && carrier_hz > 0.0, "carrier frequency must be > 0");
  require(phase_bits >= 0 && phase_bits <= 16, "phase_bits must be in [0, 16]");
}

void ElementModel::validate() const {
  require(std::isfinite(exponent_q) && exponent_q >= 0.0, "element exponent q must be >= 0");
  require(std::isfinite(back_lobe_floor_db) && back_lobe_floor_db <= 0.0,
          "back-lobe floor must be <= 0 dB");
}

void SteeringCommand::validate() const {
  require_finite(azimuth_deg, "steering azimuth");
  require_finite(elevation_deg, "steering elevation");
  require(azimuth_deg >= -90.0 && azimuth_deg <= 90.0, "steering azimuth must be in [-90, 90] deg");
  require(elevation_deg >= -90.0 && elevation_deg <= 90.0,
          "steering elevation must be in [-90, 90] deg");
}

Vec3 direction_from_angles(double az_deg, double el_deg) {
  const double az = deg2rad(az_deg);
  const double el = deg2rad(el_deg);
  return {std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el)};
}

namespace {

double quantize_phase(double phase, int bits) {
  if (bits <= 0) return phase;
  const double lsb = 2.0 * kPi / static_cast<double>(1 << bits);
  return std::round(phase / lsb) * lsb;
}

// |sum_{n<N} exp(j n psi)| without the per-element loop.
double dirichlet_magnitude(int n, double psi) {
  const double den = std::sin(0.5 * psi);
  if (std::abs(den) < 1e-12) return static_cast<double>(n);
  return std::abs(std::sin(0.5 * n * psi) / den);
}

double element_relative_power(const ElementModel &model, double ux) {
  const double floor_lin = db_to_linear(model.back_lobe_floor_db);
  if (ux <= 0.0) return floor_lin;
  return std::max(std::pow(ux, model.exponent_q), floor_lin);
}

} // namespace

std::complex<double> array_factor(const ArrayGeometry &geom, const SteeringCommand &steer,
                                  double az_deg, double el_deg) {
  geom.validate();
  steer.validate();
  require_finite(az_deg, "look azimuth");
  require_finite(el_deg, "look elevation");

  const Vec3 u = direction_from_angles(az_deg, el_deg);
  const Vec3 s = direction_from_angles(steer.azimuth_deg, steer.elevation_deg);
  const double kd = 2.0 * kPi * geom.spacing_wavelengths;

  std::complex<double> sum{0.0, 0.0};
  for (int m = 0; m < geom.n_elev; ++m) {
    for (int n = 0; n < geom.n_azim; ++n) {
      const double weight_phase = quantize_phase(-kd * (n * s.y + m * s.z), geom.phase_bits);
      const double phase = kd * (n * u.y + m * u.z) + weight_phase;
      sum += std::polar(1.0, phase);
    }
  }
  return sum;
}

double element_gain_dbi(const ElementModel &model, double az_deg, double el_deg) {
  model.validate();
  require_finite(az_deg, "azimuth");
  require_finite(el_deg, "elevation");
  const double ux = direction_from_angles(az_deg, el_deg).x;
  const double peak_dbi = linear_to_db(2.0 * (model.exponent_q + 1.0));
  return peak_dbi + linear_to_db(element_relative_power(model, ux));
}

PhasedArray::PhasedArray(ArrayGeometry geom, ElementModel model, double norm_step_deg)
    : geom_(geom), model_(model), norm_step_deg_(norm_step_deg) {
  geom_.validate();
  model_.validate();
  require(norm_step_deg > 0.0 && norm_step_deg <= kMaxStepDeg,
          "normalization step must be in (0, 5] deg");
  if (geom_.phase_bits != 0) return; // quantized weights: integrate per steer

  const int n = geom_.n_azim;
  const int m = geom_.n_elev;
  const double kd = 2.0 * kPi * geom_.spacing_wavelengths;
  j_table_.assign(static_cast<std::size_t>(n * m), 0.0);

  const double step = deg2rad(norm_step_deg);
  const int n_az = static_cast<int>(std::lround(360.0 / norm_step_deg));
  const int n_el = static_cast<int>(std::lround(180.0 / norm_step_deg));
  std::vector<double> cy(static_cast<std::size_t>(n));
  std::vector<double> cz(static_cast<std::size_t>(m));
  std::vector<double> acc(j_table_.size());
  for (int je = 0; je < n_el; ++je) {
    const double el = -90.0 + (je + 0.5) * norm_step_deg;
    std::fill(acc.begin(), acc.end(), 0.0);
    for (int ia = 0; ia < n_az; ++ia) {
      const Vec3 u = direction_from_angles(-180.0 + (ia + 0.5) * norm_step_deg, el);
      const double elem = element_relative_power(model_, u.x);
      // cos(p x) by the Chebyshev recurrence.
      auto fill = [](std::vector<double> &c, double x) {
        c[0] = 1.0;
        if (c.size() > 1) c[1] = std::cos(x);
        for (std::size_t p = 2; p < c.size(); ++p) c[p] = 2.0 * c[1] * c[p - 1] - c[p - 2];
      };
      fill(cy, kd * u.y);
      fill(cz, kd * u.z);
      for (int p = 0; p < n; ++p)
        for (int r = 0; r < m; ++r)
          acc[static_cast<std::size_t>(p * m + r)] += elem * cy[static_cast<std::size_t>(p)] *
                                                      cz[static_cast<std::size_t>(r)];
    }
    const double w = std::cos(deg2rad(el)) * step * step;
    for (std::size_t k = 0; k < acc.size(); ++k) j_table_[k] += acc[k] * w;
  }
}

double PhasedArray::raw_power_integral(const SteeringCommand &steer) const {
  steer.validate();
  if (geom_.phase_bits != 0) {
    const SteeredBeam probe(*this, steer);
    return integrate_sphere([&](double az, double el) { return probe.raw(az, el); },
                            norm_step_deg_);
  }
  const int n = geom_.n_azim;
  const int m = geom_.n_elev;
  const double kd = 2.0 * kPi * geom_.spacing_wavelengths;
  const Vec3 s = direction_from_angles(steer.azimuth_deg, steer.elevation_deg);
  double total = 0.0;
  for (int p = -(n - 1); p <= n - 1; ++p) {
    for (int r = -(m - 1); r <= m - 1; ++r) {
      const double weight = static_cast<double>((n - std::abs(p)) * (m - std::abs(r)));
      const double j = j_table_[static_cast<std::size_t>(std::abs(p) * m + std::abs(r))];
      total += weight * j * std::cos(kd * (p * s.y + r * s.z));
    }
  }
  return total;
}

SteeredBeam PhasedArray::steer(const SteeringCommand &steer) const {
  SteeredBeam beam(*this, steer);
  beam.norm_ = 4.0 * kPi / raw_power_integral(steer);
  return beam;
}

SteeredBeam::SteeredBeam(const PhasedArray &array, SteeringCommand steer)
    : geom_(array.geometry()), model_(array.element()), steer_(steer) {
  steer_.validate();
}

SteeredBeam::SteeredBeam(ArrayGeometry geom, ElementModel model, SteeringCommand steer,
                         double norm_step_deg)
    : SteeredBeam(PhasedArray(geom, model, norm_step_deg).steer(steer)) {}

double SteeredBeam::raw(double az_deg, double el_deg) const {
  const Vec3 u = direction_from_angles(az_deg, el_deg);
  const double elem = element_relative_power(model_, u.x);
  double af_mag = 0.0;
  if (geom_.phase_bits == 0) {
    const Vec3 s = direction_from_angles(steer_.azimuth_deg, steer_.elevation_deg);
    const double kd = 2.0 * kPi * geom_.spacing_wavelengths;
    af_mag = dirichlet_magnitude(geom_.n_azim, kd * (u.y - s.y)) *
             dirichlet_magnitude(geom_.n_elev, kd * (u.z - s.z));
  } else {
    af_mag = std::abs(array_factor(geom_, steer_, az_deg, el_deg));
  }
  return elem * af_mag * af_mag;
}

double SteeredBeam::gain_linear(double az_deg, double el_deg) const {
  return std::max(norm_ * raw(az_deg, el_deg), db_to_linear(kGainFloorDbi));
}

double SteeredBeam::gain_dbi(double az_deg, double el_deg) const {
  return linear_to_db(gain_linear(az_deg, el_deg));
}

double SteeredBeam::gain_dbi(const Vec3 &local_dir) const {
  const double n = local_dir.norm();
  require(n > 0.0, "direction must be non-zero");
  const double el = rad2deg(std::asin(std::clamp(local_dir.z / n, -1.0, 1.0)));
  const double az = rad2deg(std::atan2(local_dir.y, local_dir.x));
  return gain_dbi(az, el);
}

SteeredBeam::Peak SteeredBeam::peak() const {
  double az = steer_.azimuth_deg;
  double el = steer_.elevation_deg;
  double best = gain_linear(az, el);
  static constexpr std::array<std::array<int, 2>, 8> kMoves{
      {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};
  for (double step = 0.5; step > 1e-7; step *= 0.5) {
    bool moved = true;
    while (moved) {
      moved = false;
      for (const auto &mv : kMoves) {
        const double a = az + mv[0] * step;
        const double e = std::clamp(el + mv[1] * step, -90.0, 90.0);
        const double g = gain_linear(a, e);
        if (g > best) {
          best = g;
          az = a;
          el = e;
          moved = true;
        }
      }
    }
  }
  return {az, el, linear_to_db(best)};
}

namespace {

PatternCut sample_cut(double lo, double hi, double step, auto &&gain_at) {
  PatternCut cut;
  const auto n = static_cast<std::size_t>(std::lround((hi - lo) / step));
  cut.angle_deg.reserve(n + 1);
  cut.gain_dbi.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double a = std::min(lo + static_cast<double>(i) * step, hi);
    cut.angle_deg.push_back(a);
    cut.gain_dbi.push_back(gain_at(a));
  }
  return cut;
}

// Front-hemisphere sample range of a cut, [first, last].
std::pair<std::size_t, std::size_t> front_window(const PatternCut &cut) {
  std::size_t first = 0;
  while (first < cut.angle_deg.size() && cut.angle_deg[first] < -90.0) ++first;
  std::size_t last = cut.angle_deg.size() - 1;
  while (last > first && cut.angle_deg[last] > 90.0) --last;
  return {first, last};
}

std::size_t argmax_in(const PatternCut &cut, std::size_t first, std::size_t last) {
  std::size_t best = first;
  for (std::size_t i = first; i <= last; ++i)
    if (cut.gain_dbi[i] > cut.gain_dbi[best]) best = i;
  return best;
}

} // namespace

RadiationPattern compute_pattern(const ArrayGeometry &geom, const ElementModel &model,
                                 const SteeringCommand &steer, double az_step_deg,
                                 double el_step_deg, double cut_step_deg) {
  for (double s : {az_step_deg, el_step_deg, cut_step_deg}) {
    require(std::isfinite(s) && s > 0.0, "angular step must be > 0");
    require(s <= kMaxStepDeg, "angular step coarser than 5 deg makes beamwidth extraction unreliable");
  }

  const SteeredBeam beam(geom, model, steer);

  RadiationPattern p;
  p.az_step_deg = az_step_deg;
  p.el_step_deg = el_step_deg;
  for (double az = -180.0; az < 180.0 - 1e-9; az += az_step_deg) p.azimuth_deg.push_back(az);
  const auto n_el = static_cast<std::size_t>(std::floor(180.0 / el_step_deg + 1e-9));
  for (std::size_t j = 0; j <= n_el; ++j)
    p.elevation_deg.push_back(-90.0 + static_cast<double>(j) * el_step_deg);

  p.grid_dbi.reserve(p.azimuth_deg.size() * p.elevation_deg.size());
  for (double az : p.azimuth_deg)
    for (double el : p.elevation_deg) p.grid_dbi.push_back(beam.gain_dbi(az, el));

  const auto pk = beam.peak();
  p.cut_azimuth_deg = pk.az_deg;
  p.cut_elevation_deg = pk.el_deg;
  // Cuts are sampled relative to the peak so the peak itself is a sample.
  p.azimuth_cut = sample_cut(-180.0, 180.0, cut_step_deg, [&](double a) {
    return beam.gain_dbi(a, pk.el_deg);
  });
  p.elevation_cut = sample_cut(-90.0, 90.0, cut_step_deg, [&](double e) {
    return beam.gain_dbi(pk.az_deg, e);
  });
  for (auto *cut : {&p.azimuth_cut, &p.elevation_cut}) {
    const double anchor = cut == &p.azimuth_cut ? pk.az_deg : pk.el_deg;
    auto it = std::lower_bound(cut->angle_deg.begin(), cut->angle_deg.end(), anchor);
    const auto idx = static_cast<std::size_t>(it - cut->angle_deg.begin());
    const double g = cut == &p.azimuth_cut ? beam.gain_dbi(anchor, pk.el_deg)
                                           : beam.gain_dbi(pk.az_deg, anchor);
    if (it != cut->angle_deg.end() && *it == anchor) continue;
    cut->angle_deg.insert(it, anchor);
    cut->gain_dbi.insert(cut->gain_dbi.begin() + static_cast<std::ptrdiff_t>(idx), g);
  }
  return p;
}

std::optional<double> cut_hpbw_deg(const PatternCut &cut) {
  if (cut.angle_deg.size() < 3) return std::nullopt;
  const auto [first, last] = front_window(cut);
  const std::size_t i0 = argmax_in(cut, first, last);
  const double level = cut.gain_dbi[i0] - 3.0103;
  const auto &a = cut.angle_deg;
  const auto &g = cut.gain_dbi;

  auto crossing = [&](std::size_t inside, std::size_t outside) {
    const double t = (g[inside] - level) / (g[inside] - g[outside]);
    return a[inside] + t * (a[outside] - a[inside]);
  };

  std::optional<double> left, right;
  for (std::size_t i = i0; i > first; --i) {
    if (g[i - 1] < level) {
      left = crossing(i, i - 1);
      break;
    }
  }
  for (std::size_t i = i0; i < last; ++i) {
    if (g[i + 1] < level) {
      right = crossing(i, i + 1);
      break;
    }
  }
  if (!left || !right) return std::nullopt;
  return *right - *left;
}

std::optional<double> cut_sll_db(const PatternCut &cut) {
  if (cut.angle_deg.size() < 3) return std::nullopt;
  const auto [first, last] = front_window(cut);
  const std::size_t i0 = argmax_in(cut, first, last);
  const auto &g = cut.gain_dbi;

  // Main lobe runs out to the first local minimum on each side.
  std::size_t lo = i0;
  while (lo > first && g[lo - 1] <= g[lo]) --lo;
  std::size_t hi = i0;
  while (hi < last && g[hi + 1] <= g[hi]) ++hi;

  std::optional<double> best;
  for (std::size_t k = std::max<std::size_t>(first, 1); k + 1 <= last && k + 1 < g.size(); ++k) {
    if (k >= lo && k <= hi) continue;
    if (g[k] > g[k - 1] && g[k] >= g[k + 1]) {
      const double rel = g[k] - g[i0];
      if (!best || rel > *best) best = rel;
    }
  }
  return best;
}

PatternStats pattern_stats(const RadiationPattern &p) {
  require(!p.azimuth_cut.angle_deg.empty() && !p.elevation_cut.angle_deg.empty(),
          "pattern has no principal cuts");
  PatternStats s;
  s.peak_azimuth_deg = p.cut_azimuth_deg;
  s.peak_elevation_deg = p.cut_elevation_deg;
  s.peak_gain_dbi = std::max(
      *std::max_element(p.azimuth_cut.gain_dbi.begin(), p.azimuth_cut.gain_dbi.end()),
      *std::max_element(p.elevation_cut.gain_dbi.begin(), p.elevation_cut.gain_dbi.end()));
  s.hpbw_azimuth_deg = cut_hpbw_deg(p.azimuth_cut);
  s.hpbw_elevation_deg = cut_hpbw_deg(p.elevation_cut);
  s.sll_azimuth_db = cut_sll_db(p.azimuth_cut);
  s.sll_elevation_db = cut_sll_db(p.elevation_cut);
  if (s.sll_azimuth_db || s.sll_elevation_db)
    s.sll_db = std::max(s.sll_azimuth_db.value_or(-1e300), s.sll_elevation_db.value_or(-1e300));
  return s;
}

double scan_loss_db(const ArrayGeometry &geom, const ElementModel &model,
                    const SteeringCommand &steer) {
  const PhasedArray array(geom, model);
  return array.steer(SteeringCommand{}).peak().gain_dbi - array.steer(steer).peak().gain_dbi;
}

} // namespace uavabs::array
