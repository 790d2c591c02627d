// Python bindings for the simulator core. Scenarios cross the boundary as
// JSON text; results come back as plain dicts and lists.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "uavabs/array_engine.hpp"
#include "uavabs/channel.hpp"
#include "uavabs/dispatch.hpp"
#include "uavabs/geometry.hpp"
#include "uavabs/multibeam.hpp"
#include "uavabs/runner.hpp"
#include "uavabs/scenario.hpp"

namespace py = pybind11;
using namespace uavabs;

namespace {

runner::RunOptions options(std::optional<std::uint64_t> seed) {
  runner::RunOptions o;
  o.seed = seed;
  return o;
}

py::dict files_dict(const runner::RunResult &r) {
  py::dict d;
  for (const auto &f : r.files) d[py::str(f.name)] = f.content;
  return d;
}

py::dict stats_dict(const array::PatternStats &s) {
  py::dict d;
  d["peak_dbi"] = s.peak_gain_dbi;
  d["peak_az_deg"] = s.peak_azimuth_deg;
  d["peak_el_deg"] = s.peak_elevation_deg;
  d["hpbw_a_deg"] = s.hpbw_azimuth_deg;
  d["hpbw_e_deg"] = s.hpbw_elevation_deg;
  d["sll_db"] = s.sll_db;
  return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "mmWave UAV aerial base station simulator";

  py::register_exception<scenario::ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<GeometryError>(m, "GeometryError", PyExc_ValueError);

  m.def("coverage_span", &geometry::coverage_span, py::arg("h_m"), py::arg("alpha_deg"),
        py::arg("hpbw_e_deg"));
  m.def(
      "slant_distance",
      [](double h_m, double ground_m) {
        geometry::UavPose p;
        p.position = {0.0, 0.0, h_m};
        return geometry::slant_distance(p, {ground_m, 0.0});
      },
      py::arg("h_m"), py::arg("ground_m"));

  m.def(
      "pattern_stats",
      [](int n_elev, int n_azim, double spacing, double q, double steer_az, double steer_el) {
        array::ArrayGeometry g;
        g.n_elev = n_elev;
        g.n_azim = n_azim;
        g.spacing_wavelengths = spacing;
        array::ElementModel e;
        e.exponent_q = q;
        return stats_dict(array::pattern_stats(array::compute_pattern(g, e, {steer_az, steer_el})));
      },
      py::arg("n_elev") = 2, py::arg("n_azim") = 8, py::arg("spacing_wavelengths") = 0.5,
      py::arg("element_exponent") = array::kCalibratedElementExponent,
      py::arg("steer_az_deg") = 0.0, py::arg("steer_el_deg") = 0.0);
  m.def(
      "array_factor_abs",
      [](int n_elev, int n_azim, double spacing, double az, double el) {
        array::ArrayGeometry g;
        g.n_elev = n_elev;
        g.n_azim = n_azim;
        g.spacing_wavelengths = spacing;
        return std::abs(array::array_factor(g, {}, az, el));
      },
      py::arg("n_elev"), py::arg("n_azim"), py::arg("spacing_wavelengths"), py::arg("az_deg"),
      py::arg("el_deg"));

  m.def(
      "path_loss_db",
      [](double d_m, double carrier_hz) { return channel::path_loss_db({}, d_m, carrier_hz); },
      py::arg("d_m"), py::arg("carrier_hz") = channel::kWigigCentersHz[1]);
  m.def("noise_floor_dbm", &channel::noise_floor_dbm, py::arg("bandwidth_hz"),
        py::arg("noise_figure_db"));
  m.def("select_mcs", &channel::select_mcs, py::arg("snr_db"));
  m.def("mcs_rate_bps", &channel::mcs_rate, py::arg("snr_db"));

  m.def(
      "acoustic_level",
      [](double d_m, double l1, double d2, double l2) {
        return dispatch::acoustic_level(dispatch::AcousticModel::fit_two_point(l1, d2, l2), d_m);
      },
      py::arg("d_m"), py::arg("level_at_1m_db") = 88.0, py::arg("fit_distance_m") = 10.0,
      py::arg("fit_level_db") = 66.0);
  m.def(
      "min_standoff",
      [](double threshold, double l1, double d2, double l2) {
        return dispatch::min_standoff(dispatch::AcousticModel::fit_two_point(l1, d2, l2),
                                      threshold);
      },
      py::arg("threshold_db"), py::arg("level_at_1m_db") = 88.0, py::arg("fit_distance_m") = 10.0,
      py::arg("fit_level_db") = 66.0);

  m.def("bundled_scenarios", &scenario::bundled_scenario_names);
  m.def(
      "bundled_scenario_text",
      [](const std::string &name) { return scenario::bundled_scenario_text(name); },
      py::arg("name"));
  m.def(
      "resolve_config",
      [](const std::string &text) {
        return scenario::resolved_config(scenario::parse_scenario(text), 2);
      },
      py::arg("scenario_json"));

  m.def(
      "run",
      [](const std::string &text, std::optional<std::uint64_t> seed) {
        return files_dict(runner::run_all(scenario::parse_scenario(text), options(seed)));
      },
      py::arg("scenario_json"), py::arg("seed") = py::none(),
      "Runs every section of a scenario; returns {file name: CSV text}.");
  m.def(
      "reproduce",
      [](const std::string &name, std::optional<std::uint64_t> seed) {
        return files_dict(runner::reproduce(name, options(seed)));
      },
      py::arg("name"), py::arg("seed") = py::none());
  m.def(
      "evaluate",
      [](const std::string &text) {
        const auto sum = runner::evaluate_scene(scenario::parse_scenario(text));
        py::list links;
        for (const auto &l : sum.report.links) {
          py::dict d;
          d["link_id"] = l.link_id;
          d["channel"] = l.channel;
          d["outage"] = l.outage;
          d["distance_m"] = l.distance_m;
          d["snr_db"] = l.snr_db;
          d["sinr_db"] = l.sinr_db;
          d["mcs"] = l.mcs;
          d["phy_mbps"] = l.phy_rate_bps / 1e6;
          d["mac_mbps"] = l.mac_throughput_bps / 1e6;
          links.append(d);
        }
        py::dict out;
        out["links"] = links;
        out["aggregate_mbps"] = sum.report.aggregate_bps / 1e6;
        return out;
      },
      py::arg("scenario_json"));
}
