#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "uavabs/channel.hpp"

using namespace uavabs;
using namespace uavabs::channel;

namespace {

double friis_db(double d_m, double f_hz) {
  return 20.0 * std::log10(4.0 * kPi * d_m * f_hz / kSpeedOfLight);
}

LinkBudget budget_at(double d, int ch = 2) {
  LinkBudget b;
  b.tx_gain_dbi = 16.0;
  b.rx_gain_dbi = 16.0;
  b.distance_m = d;
  b.channel = WigigChannel::from_index(ch);
  return b;
}

} // namespace

TEST_CASE("WiGig channel table") {
  CHECK(WigigChannel::from_index(1).center_hz == 58.32e9);
  CHECK(WigigChannel::from_index(2).center_hz == 60.48e9);
  CHECK(WigigChannel::from_index(3).center_hz == 62.64e9);
  CHECK_THROWS_AS(WigigChannel::from_index(4), InvalidArgument);
  WigigChannel bad = WigigChannel::from_index(1);
  bad.center_hz = 60.48e9;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

TEST_CASE("path loss at the reference distance") {
  ChannelParams p;
  CHECK(path_loss_db(p, 1.0, 60.48e9) ==
        doctest::Approx(friis_db(1.0, 60.48e9) + 15.0 / 1000.0).epsilon(1e-12));
  p.reference_fspl_db = 70.0;
  p.oxygen_absorption_db_per_km = 0.0;
  CHECK(path_loss_db(p, 1.0, 60.48e9) == doctest::Approx(70.0));
}

TEST_CASE("free-space exponent matches Friis") {
  ChannelParams p;
  p.path_loss_exponent = 2.0;
  p.oxygen_absorption_db_per_km = 0.0;
  const double pl = path_loss_db(p, 41.34, 60.48e9);
  CHECK(pl == doctest::Approx(friis_db(41.34, 60.48e9)).epsilon(1e-12));
  CHECK(std::abs(pl - 100.4) <= 0.1);
  CHECK(reference_fspl_db(60.48e9) == doctest::Approx(68.07).epsilon(1e-3));
}

TEST_CASE("doubling distance adds 10 n log10 2 plus absorption") {
  ChannelParams p;
  for (double d : {1.0, 7.0, 41.34, 300.0}) {
    const double delta = path_loss_db(p, 2 * d, 60.48e9) - path_loss_db(p, d, 60.48e9);
    CHECK(delta == doctest::Approx(6.1709 + 0.015 * d).epsilon(1e-4));
  }
}

TEST_CASE("thermal noise floor") {
  CHECK(noise_floor_dbm(1.76e9, 7.0) == doctest::Approx(-174.0 + 10.0 * std::log10(1.76e9) + 7.0));
  CHECK(std::abs(noise_floor_dbm(1.76e9, 7.0) + 74.5) <= 0.1);
}

TEST_CASE("SNR is linear in tx power") {
  const ChannelParams p;
  auto b = budget_at(41.34);
  const double s0 = snr_db(b, p);
  b.tx_power_dbm += 3.0;
  CHECK(snr_db(b, p) == doctest::Approx(s0 + 3.0));
  const double oracle = 10.0 + 32.0 - path_loss_db(p, 41.34, 60.48e9) - noise_floor_dbm(1.76e9, 7.0);
  CHECK(s0 == doctest::Approx(oracle));
}

TEST_CASE("MCS staircase") {
  CHECK(mcs_rate(-20.0) == 0.0);
  CHECK(select_mcs(lowest_mcs_threshold_db() - 1e-9) == 0);
  CHECK(select_mcs(lowest_mcs_threshold_db()) >= 1);
  CHECK(mcs_rate(60.0) == doctest::Approx(4620e6));
  double prev = 0.0;
  for (double s = -10.0; s <= 30.0; s += 0.05) {
    CHECK(mcs_rate(s) >= prev);
    prev = mcs_rate(s);
  }
  const auto t = sc_mcs_table();
  REQUIRE(t.size() == 12);
  CHECK(t[0].phy_rate_bps == doctest::Approx(385e6));
  CHECK(t[8].phy_rate_bps == doctest::Approx(2502.5e6));
  CHECK(t[9].phy_rate_bps == doctest::Approx(3080e6));
}

TEST_CASE("MAC throughput") {
  CHECK(mac_throughput(4620e6, 1.0) == doctest::Approx(4620e6));
  CHECK(mac_throughput(4620e6, 0.65) == doctest::Approx(3003e6));
  CHECK_THROWS_AS(mac_throughput(1e9, 0.0), InvalidArgument);
  CHECK_THROWS_AS(mac_throughput(1e9, 1.2), InvalidArgument);
  const auto r = evaluate_link(budget_at(20.0), {});
  CHECK(r.mac_throughput_bps <= r.phy_rate_bps);
}

TEST_CASE("received power strictly decreases with distance") {
  for (double n : {1.0, 2.05, 3.0}) {
    ChannelParams p;
    p.path_loss_exponent = n;
    double prev = rx_power_dbm(budget_at(1.0), p);
    for (double d = 1.5; d < 2000.0; d *= 1.1) {
      const double r = rx_power_dbm(budget_at(d), p);
      CHECK(r < prev);
      prev = r;
    }
  }
}

TEST_CASE("air-to-ground exponent never loses to terrestrial") {
  ChannelParams a2g, ter;
  ter.path_loss_exponent = kTerrestrialPathLossExponent;
  for (double d = 1.0; d < 500.0; d *= 1.05)
    CHECK(evaluate_link(budget_at(d), a2g).phy_rate_bps >=
          evaluate_link(budget_at(d), ter).phy_rate_bps);
}

TEST_CASE("shadowing draws are seeded") {
  ChannelParams p;
  p.shadow_sigma_db = 4.0;
  CHECK_THROWS_AS(path_loss_db(p, 10.0, 60.48e9), InvalidArgument);
  Rng a(42), b(42), c(43);
  std::vector<double> xa, xb, xc;
  for (int i = 0; i < 20; ++i) {
    xa.push_back(path_loss_db(p, 10.0, 60.48e9, &a));
    xb.push_back(path_loss_db(p, 10.0, 60.48e9, &b));
    xc.push_back(path_loss_db(p, 10.0, 60.48e9, &c));
  }
  CHECK(xa == xb);
  CHECK(xa != xc);
}

TEST_CASE("invalid channel inputs") {
  ChannelParams p;
  CHECK_THROWS_AS(path_loss_db(p, 0.5, 60.48e9), InvalidArgument);
  p.path_loss_exponent = 0.5;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
  ChannelParams q;
  q.oxygen_absorption_db_per_km = -1.0;
  CHECK_THROWS_AS(q.validate(), InvalidArgument);
}
