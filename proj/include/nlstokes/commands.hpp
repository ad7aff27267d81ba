#ifndef NLSTOKES_COMMANDS_HPP
#define NLSTOKES_COMMANDS_HPP

#include "nlstokes/config.hpp"

#include <exception>
#include <filesystem>
#include <string>
#include <vector>

namespace nlstokes {

enum ExitCode : int {
  exit_ok = 0,
  exit_failure = 1,    ///< a library error or precondition failure
  exit_config = 2,     ///< the configuration did not validate
  exit_nonfinite = 3,  ///< artifacts were written but contain nan or inf
};

struct RunResult {
  int exit_code = exit_ok;
  std::vector<std::filesystem::path> artifacts;
  std::vector<std::string> warnings;
  std::string summary;  ///< one-line JSON object
};

/// Executes the subcommand. Everything is computed before the first file is
/// written, so a failing run leaves no artifacts behind.
RunResult run_command(const ExperimentConfig& config);

/// One-line JSON description of a failure, e.g.
/// {"error":"ill_posed_kernel","message":"...","mode":[3,1]}
std::string error_json(const std::exception& e);

}  // namespace nlstokes

#endif  // NLSTOKES_COMMANDS_HPP
