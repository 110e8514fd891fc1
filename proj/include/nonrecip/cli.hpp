#pragma once

#include "nonrecip/report.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace nonrecip {

struct ScenarioConfig {
  std::string command;
  nlohmann::json params = nlohmann::json::object();
  std::string output_dir = ".";
  std::uint64_t seed = 20240611;
  std::string format = "csv";
  bool gnuplot = false;
};

const std::vector<std::string>& command_names();

/// Runs one command and returns its report. Throws Error on invalid config or numerical failure.
Report execute(const ScenarioConfig& config);

/// Executes and writes artifacts. Returns 0, 2 (invalid config) or 3 (numerical or I/O failure);
/// failures print a JSON error object to `err`.
int run(const ScenarioConfig& config, std::ostream& err);

/// Argument parsing front end used by the executable.
int run_cli(int argc, char** argv);

}  // namespace nonrecip
