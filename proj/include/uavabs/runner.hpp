#pragma once

// Subcommand implementations shared by the CLI and the Python module. Each
// returns its output files in memory; write_outputs puts them on disk.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "uavabs/scenario.hpp"

namespace uavabs::runner {

struct OutputFile {
  std::string name;
  std::string content;
};

struct RunResult {
  std::vector<OutputFile> files;
  std::vector<std::string> notes;
  void append(RunResult other);
};

struct RunOptions {
  std::optional<std::uint64_t> seed; // overrides the scenario seed
};

// Each throws scenario::ValidationError when the scenario lacks what the
// subcommand needs (exit code 2 in the CLI).
RunResult run_pattern(const scenario::Scenario &s, const RunOptions &opt = {});
RunResult run_coverage(const scenario::Scenario &s, const RunOptions &opt = {});
RunResult run_link(const scenario::Scenario &s, const RunOptions &opt = {});
RunResult run_evaluate(const scenario::Scenario &s, const RunOptions &opt = {});
RunResult run_mission(const scenario::Scenario &s, const RunOptions &opt = {});
RunResult run_acoustics(const scenario::Scenario &s, const RunOptions &opt = {});
// Every subcommand whose section is present in the scenario.
RunResult run_all(const scenario::Scenario &s, const RunOptions &opt = {});

// Names in the order `reproduce` runs them.
std::vector<std::string> reproduce_names();
RunResult reproduce(const std::string &name, const RunOptions &opt = {});

struct EvaluateSummary {
  multibeam::Assignment assignment;
  multibeam::SinrReport report;
};
EvaluateSummary evaluate_scene(const scenario::Scenario &s, const RunOptions &opt = {});

void write_outputs(const RunResult &r, const std::filesystem::path &dir);

} // namespace uavabs::runner
