// uavabs: command-line front end for the UAV aerial base station simulator.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "uavabs/runner.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

using uavabs::runner::RunOptions;
using uavabs::runner::RunResult;
using uavabs::scenario::Scenario;

struct Flags {
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out;
  bool print_config = false;
  bool quiet = false;
};

void emit(const RunResult &r, const std::string &dir, const Flags &f) {
  uavabs::runner::write_outputs(r, dir);
  if (f.quiet) return;
  for (const auto &n : r.notes) std::cerr << n << '\n';
  for (const auto &file : r.files) std::cout << dir << '/' << file.name << '\n';
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"mmWave UAV aerial base station simulator"};
  app.require_subcommand(1);
  Flags flags;
  auto *seed_opt = app.add_option("--seed", flags.seed, "RNG seed (overrides the scenario)");
  app.add_option("--out", flags.out, "Output directory (overrides the scenario)");
  app.add_flag("--print-config", flags.print_config, "Print the resolved configuration and exit");
  app.add_flag("--quiet", flags.quiet, "Suppress progress notes");
  app.fallthrough();

  std::string scenario_path;
  const std::vector<std::pair<std::string, std::string>> single{
      {"pattern", "Radiation pattern cuts and statistics"},
      {"coverage", "Ground coverage footprint table"},
      {"link", "Single-link budget sweep"},
      {"evaluate", "Multi-stream assignment and SINR"},
      {"mission", "Dispatch mission log"},
  };
  std::vector<CLI::App *> single_cmds;
  for (const auto &[name, help] : single) {
    auto *cmd = app.add_subcommand(name, help);
    cmd->add_option("scenario", scenario_path, "Scenario JSON file")->required();
    single_cmds.push_back(cmd);
  }
  std::vector<std::string> names;
  auto *repro = app.add_subcommand("reproduce", "Run bundled scenarios (all when none given)");
  repro->add_option("names", names, "Bundled scenario names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }
  flags.seed_set = seed_opt->count() > 0;
  RunOptions opt;
  if (flags.seed_set) opt.seed = flags.seed;

  try {
    if (repro->parsed()) {
      if (names.empty()) names = uavabs::runner::reproduce_names();
      std::vector<Scenario> scenarios;
      for (const auto &n : names)
        scenarios.push_back(
            uavabs::scenario::parse_scenario(uavabs::scenario::bundled_scenario_text(n)));
      if (flags.print_config) {
        for (auto s : scenarios) {
          if (opt.seed) s.seed = *opt.seed;
          std::cout << uavabs::scenario::resolved_config(s, 2) << '\n';
        }
        return kExitOk;
      }
      RunResult all;
      for (const auto &s : scenarios) all.append(uavabs::runner::run_all(s, opt));
      emit(all, flags.out.empty() ? std::string("out") : flags.out, flags);
      return kExitOk;
    }

    Scenario s = uavabs::scenario::load_scenario(scenario_path);
    if (opt.seed) s.seed = *opt.seed;
    if (flags.print_config) {
      std::cout << uavabs::scenario::resolved_config(s, 2) << '\n';
      return kExitOk;
    }
    RunResult r;
    const std::string cmd = app.get_subcommands().front()->get_name();
    if (cmd == "pattern") r = uavabs::runner::run_pattern(s, opt);
    else if (cmd == "coverage") r = uavabs::runner::run_coverage(s, opt);
    else if (cmd == "link") r = uavabs::runner::run_link(s, opt);
    else if (cmd == "evaluate") r = uavabs::runner::run_evaluate(s, opt);
    else r = uavabs::runner::run_mission(s, opt);
    emit(r, flags.out.empty() ? s.out_dir : flags.out, flags);
    return kExitOk;
  } catch (const uavabs::scenario::ValidationError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception &e) {
    std::cerr << "runtime error: " << e.what() << '\n';
    return kExitRuntime;
  }
}
