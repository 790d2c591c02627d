#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "uavabs/runner.hpp"
#include "uavabs/scenario.hpp"

using namespace uavabs;
using namespace uavabs::scenario;

namespace {

std::string error_of(const std::string &text) {
  try {
    parse_scenario(text);
  } catch (const ValidationError &e) {
    return e.what();
  }
  return "";
}

const runner::OutputFile &file(const runner::RunResult &r, const std::string &name) {
  for (const auto &f : r.files)
    if (f.name == name) return f;
  throw std::runtime_error("missing output " + name);
}

// Second line onward: drops the "# config=" comment.
std::string body(const std::string &csv) { return csv.substr(csv.find('\n') + 1); }

} // namespace

TEST_CASE("defaults for an empty document") {
  const auto s = parse_scenario("{}");
  CHECK(s.name == "scenario");
  CHECK(s.seed == 1);
  CHECK(s.array.n_azim == 8);
  CHECK(s.array.n_elev == 2);
  CHECK(s.element.exponent_q == doctest::Approx(array::kCalibratedElementExponent));
  CHECK_FALSE(s.scene);
  CHECK(s.channel.mac_efficiency == doctest::Approx(channel::kCalibratedMacEfficiency));
}

TEST_CASE("every bundled scenario parses and round-trips") {
  const auto names = bundled_scenario_names();
  for (const auto &n : runner::reproduce_names())
    CHECK(std::find(names.begin(), names.end(), n) != names.end());
  for (const auto &n : names) {
    CAPTURE(n);
    const auto s = parse_scenario(bundled_scenario_text(n));
    CHECK(s.name == n);
    const auto once = resolved_config(s);
    CHECK(resolved_config(parse_scenario(once)) == once);
  }
}

TEST_CASE("unknown keys are rejected with their path") {
  CHECK(error_of(R"({"colour": 1})").find("/colour: unknown key") == 0);
  CHECK(error_of(R"({"array": {"n_azimuth": 8}})").find("/array/n_azimuth") == 0);
  CHECK(error_of(R"({"uav": {"mounts": [{"id": "a", "tilt": 3}]}})").find("/uav/mounts/0/tilt") ==
        0);
}

TEST_CASE("malformed JSON reports line and column") {
  const auto e = error_of("{\n  \"name\": \"x\",\n  \"seed\": ,\n}");
  CHECK(e.find("line 3") == 0);
}

TEST_CASE("type and range errors name the field") {
  CHECK(error_of(R"({"seed": -3})").find("/seed") == 0);
  CHECK(error_of(R"({"array": {"n_elev": 0}})").find("/array") == 0);
  CHECK(error_of(R"({"link": {"distances_m": [0.5]}})").find("/link/distances_m") == 0);
  CHECK(error_of(R"({"coverage": {"alphas_deg": [95]}})").find("/coverage/alphas_deg") == 0);
  CHECK(error_of(R"({"mission": {}})").find("/mission") == 0);
  CHECK(error_of(R"({"uav": {}, "mission": {"events": [{"t": 1, "type": "Teleport"}]}})")
            .find("/mission/events/0/type") == 0);
  CHECK(error_of(R"({"uav": {}, "ues": [{"id": "a"}]})").find("/ues/0/position") == 0);
}

TEST_CASE("ground modules default to aiming at the UAV") {
  const auto s = parse_scenario(
      R"({"uav": {"position": [0, 0, 35]}, "ues": [{"id": "u", "position": [22, 0], "mounts": [{"id": "m"}]}]})");
  const auto &m = s.scene->ues[0].mounts[0].mount;
  CHECK(m.yaw_deg == doctest::Approx(180.0));
  CHECK(m.downtilt_deg == doctest::Approx(-rad2deg(std::atan2(35.0, 22.0))));
}

TEST_CASE("two-user layout places the users") {
  const auto s = parse_scenario(bundled_scenario_text("mu_field_trial_d2_10"));
  REQUIRE(s.scene->ues.size() == 2);
  CHECK(s.scene->ues[1].position.x == doctest::Approx(12.0));
  CHECK(s.scene->ues[1].position.y == doctest::Approx(3.0));
}

TEST_CASE("evaluate without users is a validation failure") {
  const auto s = parse_scenario(R"({"uav": {"mounts": [{"id": "a"}]}})");
  try {
    runner::run_evaluate(s);
    FAIL("expected a validation error");
  } catch (const ValidationError &e) {
    CHECK(std::string(e.what()).find("no users") != std::string::npos);
  }
}

TEST_CASE("coverage output carries the 25.7 m span") {
  const auto r = runner::reproduce("eq1_coverage");
  const auto csv = body(file(r, "eq1_coverage_coverage.csv").content);
  CHECK(csv.rfind("h_m,alpha_deg,hpbw_e_deg,L1_m,L2_m,L3_m,span_m\n", 0) == 0);
  CHECK(csv.find("10.00,50.00,60.00,1.7633,8.3910,27.4748,25.7115\n") != std::string::npos);
}

TEST_CASE("pattern stats line") {
  const auto r = runner::reproduce("fig3_array");
  const auto csv = body(file(r, "fig3_array_stats.csv").content);
  double peak, hpa, hpe, sll;
  REQUIRE(std::sscanf(csv.c_str(), "peak_dbi,hpbw_a_deg,hpbw_e_deg,sll_db\n%lf,%lf,%lf,%lf", &peak,
                      &hpa, &hpe, &sll) == 4);
  CHECK(std::abs(sll + 13.26) <= 0.3);
  CHECK(std::abs(peak - 16.46) <= 1.0);
}

TEST_CASE("outputs embed the resolved config and are deterministic") {
  const auto s = parse_scenario(bundled_scenario_text("su_field_trial"));
  const auto a = runner::run_all(s);
  const auto b = runner::run_all(s);
  REQUIRE(a.files.size() == b.files.size());
  for (std::size_t i = 0; i < a.files.size(); ++i) {
    CHECK(a.files[i].content == b.files[i].content);
    CHECK(a.files[i].content.rfind("# config={\"name\":\"su_field_trial\"", 0) == 0);
    CHECK(a.files[i].content.find('\r') == std::string::npos);
  }
  runner::RunOptions other;
  other.seed = 99;
  const auto c = runner::run_mission(s, other);
  CHECK(c.files[0].content != file(a, "su_field_trial_mission.csv").content);
  CHECK(c.files[0].content.find("\"seed\":99") != std::string::npos);
}

TEST_CASE("link sweep") {
  const auto s = parse_scenario(R"({"link": {"distances_m": [1, 10, 100]}})");
  const auto csv = body(runner::run_link(s).files[0].content);
  CHECK(csv.rfind("distance_m,path_loss_db,snr_db,phy_mbps,mac_mbps\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  CHECK_THROWS_AS(runner::run_link(parse_scenario("{}")), ValidationError);
}
