#include "uavabs/channel.hpp"

#include <algorithm>

namespace uavabs::channel {

WigigChannel WigigChannel::from_index(int index, double occupied_bw_hz) {
  require(index >= 1 && index <= 3, "WiGig channel index must be 1..3");
  WigigChannel ch;
  ch.index = index;
  ch.center_hz = kWigigCentersHz[static_cast<std::size_t>(index - 1)];
  ch.occupied_bw_hz = occupied_bw_hz;
  ch.validate();
  return ch;
}

void WigigChannel::validate() const {
  require(index >= 1 && index <= 3, "WiGig channel index must be 1..3");
  require(center_hz == kWigigCentersHz[static_cast<std::size_t>(index - 1)],
          "WiGig channel center does not match its index");
  require(std::isfinite(occupied_bw_hz) && occupied_bw_hz > 0.0, "occupied bandwidth must be > 0");
}

double reference_fspl_db(double carrier_hz) {
  require(std::isfinite(carrier_hz) && carrier_hz > 0.0, "carrier frequency must be > 0");
  return 20.0 * std::log10(4.0 * kPi / wavelength_m(carrier_hz));
}

void ChannelParams::validate() const {
  require(std::isfinite(path_loss_exponent) && path_loss_exponent >= 1.0,
          "path-loss exponent must be >= 1");
  require(std::isfinite(oxygen_absorption_db_per_km) && oxygen_absorption_db_per_km >= 0.0,
          "oxygen absorption must be >= 0");
  require(std::isfinite(shadow_sigma_db) && shadow_sigma_db >= 0.0,
          "shadowing sigma must be >= 0");
  if (reference_fspl_db) require_finite(*reference_fspl_db, "reference FSPL");
}

double path_loss_db(const ChannelParams &params, double d_m, double carrier_hz, Rng *rng) {
  params.validate();
  require(std::isfinite(d_m) && d_m >= 1.0, "distance must be >= 1 m (reference distance)");
  const double ref = params.reference_fspl_db.value_or(reference_fspl_db(carrier_hz));
  double loss = ref + 10.0 * params.path_loss_exponent * std::log10(d_m) +
                params.oxygen_absorption_db_per_km * d_m / 1000.0;
  if (params.shadow_sigma_db > 0.0) {
    require(rng != nullptr, "shadowing requires a seeded random source");
    std::normal_distribution<double> shadow(0.0, params.shadow_sigma_db);
    loss += shadow(*rng);
  }
  return loss;
}

void LinkBudget::validate() const {
  require_finite(tx_power_dbm, "tx power");
  require_finite(tx_gain_dbi, "tx gain");
  require_finite(rx_gain_dbi, "rx gain");
  require_finite(noise_figure_db, "noise figure");
  require(std::isfinite(distance_m) && distance_m > 0.0, "link distance must be > 0");
  channel.validate();
}

double noise_floor_dbm(double bandwidth_hz, double noise_figure_db) {
  require(bandwidth_hz > 0.0, "bandwidth must be > 0");
  return kThermalNoiseDbmPerHz + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
}

double rx_power_dbm(const LinkBudget &budget, const ChannelParams &params, Rng *rng) {
  budget.validate();
  return budget.tx_power_dbm + budget.tx_gain_dbi + budget.rx_gain_dbi -
         path_loss_db(params, budget.distance_m, budget.channel.center_hz, rng);
}

double snr_db(const LinkBudget &budget, const ChannelParams &params, Rng *rng) {
  return rx_power_dbm(budget, params, rng) -
         noise_floor_dbm(budget.channel.occupied_bw_hz, budget.noise_figure_db);
}

namespace {

// 802.11ad SC PHY rates with thresholds taken from the standard's receiver
// sensitivity table referenced to -174 + 10log10(1.76 GHz) + 10 dB NF
// (= -71.5 dBm). MCS 5 needs more SNR than MCS 6 in that table; the selector
// picks the fastest satisfied entry so the staircase stays monotone.
constexpr std::array<McsEntry, 12> kScMcs{{
    {1, 385.0e6, -68.0 + 71.5},
    {2, 770.0e6, -66.0 + 71.5},
    {3, 962.5e6, -65.0 + 71.5},
    {4, 1155.0e6, -64.0 + 71.5},
    {5, 1251.25e6, -62.0 + 71.5},
    {6, 1540.0e6, -63.0 + 71.5},
    {7, 1925.0e6, -62.0 + 71.5},
    {8, 2310.0e6, -61.0 + 71.5},
    {9, 2502.5e6, -59.0 + 71.5},
    {10, 3080.0e6, -55.0 + 71.5},
    {11, 3850.0e6, -54.0 + 71.5},
    {12, 4620.0e6, -53.0 + 71.5},
}};

} // namespace

std::span<const McsEntry> sc_mcs_table() { return kScMcs; }

int select_mcs(double snr) {
  int best = 0;
  double best_rate = 0.0;
  for (const auto &e : kScMcs) {
    if (snr >= e.min_snr_db && e.phy_rate_bps > best_rate) {
      best = e.mcs;
      best_rate = e.phy_rate_bps;
    }
  }
  return best;
}

double mcs_rate(double snr) {
  const int mcs = select_mcs(snr);
  return mcs == 0 ? 0.0 : kScMcs[static_cast<std::size_t>(mcs - 1)].phy_rate_bps;
}

double lowest_mcs_threshold_db() {
  return std::min_element(kScMcs.begin(), kScMcs.end(), [](const auto &a, const auto &b) {
           return a.min_snr_db < b.min_snr_db;
         })->min_snr_db;
}

double mac_throughput(double phy_rate_bps, double efficiency) {
  require(std::isfinite(efficiency) && efficiency > 0.0 && efficiency <= 1.0,
          "MAC efficiency must be in (0, 1]");
  require(std::isfinite(phy_rate_bps) && phy_rate_bps >= 0.0, "PHY rate must be >= 0");
  return phy_rate_bps * efficiency;
}

LinkResult evaluate_link(const LinkBudget &budget, const ChannelParams &params,
                         double mac_efficiency, Rng *rng) {
  LinkResult r;
  r.rx_power_dbm = rx_power_dbm(budget, params, rng);
  r.snr_db = r.rx_power_dbm - noise_floor_dbm(budget.channel.occupied_bw_hz, budget.noise_figure_db);
  r.mcs = select_mcs(r.snr_db);
  r.phy_rate_bps = mcs_rate(r.snr_db);
  r.mac_throughput_bps = mac_throughput(r.phy_rate_bps, mac_efficiency);
  return r;
}

} // namespace uavabs::channel
