#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <complex>
#include <random>

#include "uavabs/array_engine.hpp"

using namespace uavabs;
using namespace uavabs::array;

namespace {

// Phasor sum written out from the array definition.
std::complex<double> af_oracle(int n_elev, int n_azim, double d_wl, double s_az, double s_el,
                               double az, double el) {
  const double kd = 2.0 * kPi * d_wl;
  auto dir = [](double a, double e) {
    const double ca = std::cos(deg2rad(a)), sa = std::sin(deg2rad(a));
    const double ce = std::cos(deg2rad(e)), se = std::sin(deg2rad(e));
    return std::array<double, 3>{ce * ca, ce * sa, se};
  };
  const auto u = dir(az, el);
  const auto s = dir(s_az, s_el);
  std::complex<double> sum = 0.0;
  for (int m = 0; m < n_elev; ++m)
    for (int n = 0; n < n_azim; ++n)
      sum += std::polar(1.0, kd * (n * (u[1] - s[1]) + m * (u[2] - s[2])));
  return sum;
}

double sphere_integral(const SteeredBeam &b, double step_deg) {
  double total = 0.0;
  const double step = deg2rad(step_deg);
  for (double el = -90.0 + step_deg / 2; el < 90.0; el += step_deg)
    for (double az = -180.0 + step_deg / 2; az < 180.0; az += step_deg)
      total += b.gain_linear(az, el) * std::cos(deg2rad(el)) * step * step;
  return total;
}

PatternStats broadside_stats() {
  static const PatternStats st = pattern_stats(compute_pattern({}, {}, {}));
  return st;
}

} // namespace

TEST_CASE("element peak gain follows 2(q+1)") {
  for (double q : {0.0, 0.75, 2.0}) {
    ElementModel m{q, -20.0};
    CHECK(element_gain_dbi(m, 0.0, 0.0) == doctest::Approx(10.0 * std::log10(2.0 * (q + 1.0))));
    CHECK(element_gain_dbi(m, 180.0, 0.0) ==
          doctest::Approx(10.0 * std::log10(2.0 * (q + 1.0)) - 20.0));
  }
  // Isotropic front hemisphere: 3.01 dBi.
  CHECK(element_gain_dbi({0.0, -20.0}, 30.0, 20.0) == doctest::Approx(3.0103).epsilon(1e-4));
}

TEST_CASE("element front hemisphere integrates to 4 pi") {
  for (double q : {0.0, 0.75, 1.5}) {
    const ElementModel m{q, -200.0};
    double total = 0.0;
    const double st = 0.25, step = deg2rad(st);
    for (double el = -90.0 + st / 2; el < 90.0; el += st)
      for (double az = -90.0 + st / 2; az < 90.0; az += st)
        total += db_to_linear(element_gain_dbi(m, az, el)) * std::cos(deg2rad(el)) * step * step;
    CHECK(total / (4.0 * kPi) == doctest::Approx(1.0).epsilon(2e-3));
  }
}

TEST_CASE("array factor matches the phasor-sum oracle") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> az(-180, 180), el(-90, 90), s_az(-60, 60), s_el(-45, 45);
  for (int i = 0; i < 200; ++i) {
    ArrayGeometry g;
    g.n_elev = 1 + i % 3;
    g.n_azim = 2 + i % 9;
    g.spacing_wavelengths = 0.4 + 0.05 * (i % 5);
    const SteeringCommand s{s_az(rng), s_el(rng)};
    const double a = az(rng), e = el(rng);
    const auto lib = array_factor(g, s, a, e);
    const auto ref = af_oracle(g.n_elev, g.n_azim, g.spacing_wavelengths, s.azimuth_deg,
                               s.elevation_deg, a, e);
    CHECK(std::abs(lib - ref) < 1e-9);
    CHECK(std::abs(lib) <= g.element_count() + 1e-9);
  }
}

TEST_CASE("array factor peaks at the steering direction") {
  ArrayGeometry g;
  const SteeringCommand s{25.0, -10.0};
  CHECK(std::abs(array_factor(g, s, 25.0, -10.0)) == doctest::Approx(16.0));
}

TEST_CASE("line array nulls at the closed-form angles") {
  for (int n : {4, 8, 16}) {
    ArrayGeometry g;
    g.n_elev = 1;
    g.n_azim = n;
    for (int k = 1; k < n / 2; ++k) {
      const double az = rad2deg(std::asin(2.0 * k / n));
      CHECK(std::abs(array_factor(g, {}, az, 0.0)) / n < 1e-6);
    }
  }
}

TEST_CASE("realized gain integrates to 4 pi") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> s_az(-60, 60), s_el(-40, 40);
  for (int i = 0; i < 4; ++i) {
    ArrayGeometry g;
    g.n_elev = 1 + i;
    g.n_azim = 3 + 2 * i;
    const SteeredBeam b(g, {}, {s_az(rng), s_el(rng)});
    CHECK(sphere_integral(b, 0.25) / (4.0 * kPi) == doctest::Approx(1.0).epsilon(0.01));
  }
}

TEST_CASE("quantized phase shifters keep the normalization") {
  ArrayGeometry g;
  g.phase_bits = 2;
  const SteeredBeam b(g, {}, {17.0, 0.0});
  CHECK(sphere_integral(b, 0.5) / (4.0 * kPi) == doctest::Approx(1.0).epsilon(0.01));
  const SteeredBeam ideal(ArrayGeometry{}, {}, {17.0, 0.0});
  CHECK(b.peak().gain_dbi <= ideal.peak().gain_dbi + 1e-6);
}

TEST_CASE("broadside 2x8 statistics") {
  const auto st = broadside_stats();
  CHECK(st.peak_gain_dbi == doctest::Approx(16.46).epsilon(0.06));
  REQUIRE(st.hpbw_azimuth_deg);
  CHECK(*st.hpbw_azimuth_deg == doctest::Approx(rad2deg(0.886 / (8 * 0.5))).epsilon(0.025));
  REQUIRE(st.hpbw_elevation_deg);
  CHECK(std::abs(*st.hpbw_elevation_deg - 60.0) <= 5.0);
  REQUIRE(st.sll_azimuth_db);
  CHECK(std::abs(*st.sll_azimuth_db + 13.26) <= 0.3);
  CHECK(st.peak_azimuth_deg == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("steering moves the main lobe and costs gain") {
  const PhasedArray arr({}, {});
  const auto p30 = arr.steer({30.0, 0.0}).peak();
  CHECK(std::abs(p30.az_deg - 30.0) < 1.0);
  double prev = 0.0;
  for (double a = 0.0; a <= 60.0; a += 5.0) {
    const double loss = scan_loss_db({}, {}, {a, 0.0});
    CHECK(loss >= prev - 1e-9);
    prev = loss;
  }
  CHECK(scan_loss_db({}, {}, {}) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("cut statistics on a synthetic cut") {
  PatternCut c;
  // sinc^2-like main lobe with a single -20 dB sidelobe pair.
  for (double a = -90.0; a <= 90.0; a += 0.1) {
    const double x = a / 10.0;
    const double main = x == 0.0 ? 1.0 : std::pow(std::sin(kPi * x) / (kPi * x), 2);
    c.angle_deg.push_back(a);
    c.gain_dbi.push_back(10.0 * std::log10(std::max(main, 1e-12)));
  }
  const auto hp = cut_hpbw_deg(c);
  REQUIRE(hp);
  CHECK(*hp == doctest::Approx(2 * 4.4295).epsilon(0.01));
  const auto sll = cut_sll_db(c);
  REQUIRE(sll);
  CHECK(*sll == doctest::Approx(-13.26).epsilon(0.01));
}

TEST_CASE("single isotropic element has no defined beamwidth") {
  ArrayGeometry g;
  g.n_elev = 1;
  g.n_azim = 1;
  const auto st = pattern_stats(compute_pattern(g, {0.0, -20.0}, {}, 2.0, 2.0, 1.0));
  CHECK_FALSE(st.hpbw_azimuth_deg);
  // Front hemisphere at 1, back at the -20 dB floor.
  CHECK(st.peak_gain_dbi == doctest::Approx(10.0 * std::log10(2.0 / 1.01)).epsilon(1e-3));
}

TEST_CASE("invalid inputs are rejected") {
  ArrayGeometry g;
  g.n_elev = 0;
  CHECK_THROWS_AS(g.validate(), InvalidArgument);
  CHECK_THROWS_AS(compute_pattern({}, {}, {}, 6.0), InvalidArgument);
  CHECK_THROWS_AS(SteeringCommand({0.0, 95.0}).validate(), InvalidArgument);
  CHECK_THROWS_AS(element_gain_dbi({-1.0, -20.0}, 0.0, 0.0), InvalidArgument);
}
