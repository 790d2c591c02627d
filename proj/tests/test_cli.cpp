// Runs the uavabs executable end to end and checks exit codes and outputs.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Run run(const std::string &args) {
  const std::string cmd = std::string(UAVABS_CLI_PATH) + " " + args + " >cli_stdout.txt 2>cli_stderr.txt";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp("cli_stdout.txt"),
          slurp("cli_stderr.txt")};
}

void write(const fs::path &p, const std::string &text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

} // namespace

TEST_CASE("pattern subcommand writes cut and stats files") {
  write("pat.json", R"({"name": "pat", "pattern": {}})");
  const auto r = run("pattern pat.json --out cli_pat --quiet");
  CHECK(r.code == 0);
  CHECK(fs::exists("cli_pat/pat_azimuth_cut.csv"));
  CHECK(fs::exists("cli_pat/pat_elevation_cut.csv"));
  CHECK(slurp("cli_pat/pat_stats.csv").find("peak_dbi,hpbw_a_deg,hpbw_e_deg,sll_db\n") !=
        std::string::npos);
}

TEST_CASE("evaluate with no users exits 2") {
  write("nousers.json", R"({"name": "nousers", "uav": {"mounts": [{"id": "a"}]}, "ues": []})");
  const auto r = run("evaluate nousers.json --out cli_nousers");
  CHECK(r.code == 2);
  CHECK(r.err.find("no users") != std::string::npos);
}

TEST_CASE("malformed scenarios exit 2 with a location") {
  write("bad.json", "{\n  \"name\": \"bad\",\n  \"pattern\": {\"steer_az_deg\": 0,}\n}");
  auto r = run("pattern bad.json");
  CHECK(r.code == 2);
  CHECK(r.err.find("line 3") != std::string::npos);
  write("unknown.json", R"({"name": "u", "patern": {}})");
  r = run("pattern unknown.json");
  CHECK(r.code == 2);
  CHECK(r.err.find("/patern: unknown key") != std::string::npos);
  CHECK(run("pattern does_not_exist.json").code == 2);
  CHECK(run("frobnicate").code == 2);
}

TEST_CASE("runtime errors exit 3") {
  write("cov.json", R"({"name": "cov", "array": {"n_elev": 1, "n_azim": 1, "element_exponent": 0}, "coverage": {}})");
  // An isotropic element has no elevation HPBW to derive coverage from: that
  // is a validation failure, not a crash.
  CHECK(run("coverage cov.json --out cli_cov").code == 2);
  fs::create_directories("cli_blocked");
  write("cli_blocked/file", "x");
  write("pat2.json", R"({"name": "pat2", "pattern": {}})");
  CHECK(run("pattern pat2.json --out cli_blocked/file/sub").code == 3);
}

TEST_CASE("same seed gives byte-identical files") {
  auto a = run("reproduce su_field_trial --seed 5 --out cli_a --quiet");
  auto b = run("reproduce su_field_trial --seed 5 --out cli_b --quiet");
  auto c = run("reproduce su_field_trial --seed 6 --out cli_c --quiet");
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  REQUIRE(c.code == 0);
  for (const auto &e : fs::directory_iterator("cli_a")) {
    const auto name = e.path().filename();
    CHECK(slurp(e.path()) == slurp(fs::path("cli_b") / name));
  }
  CHECK(slurp("cli_a/su_field_trial_mission.csv") != slurp("cli_c/su_field_trial_mission.csv"));
}

TEST_CASE("print-config dumps the resolved scenario") {
  write("pc.json", R"({"name": "pc", "link": {}})");
  const auto r = run("link pc.json --print-config");
  CHECK(r.code == 0);
  CHECK(r.out.find("\"mac_efficiency\"") != std::string::npos);
  CHECK(r.out.find("\"distances_m\"") != std::string::npos);
  CHECK_FALSE(fs::exists("out/pc_link.csv"));
}

TEST_CASE("reproduce runs every bundled scenario within a minute") {
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = run("reproduce --out cli_all");
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(r.code == 0);
  CHECK(secs < 60.0);
  for (const char *f : {"fig3_array_stats.csv", "eq1_coverage_coverage.csv",
                        "su_field_trial_evaluate.csv", "su_field_trial_mission.csv",
                        "mu_field_trial_d1_6_evaluate.csv", "mu_field_trial_d2_10_evaluate.csv",
                        "acoustics_standoff.csv"})
    CHECK(fs::exists(fs::path("cli_all") / f));
  CHECK(slurp("cli_all/eq1_coverage_coverage.csv").find(",25.7115\n") != std::string::npos);
}
