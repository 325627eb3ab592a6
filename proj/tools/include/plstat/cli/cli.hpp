#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace plstat::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUnexpected = 1,
  kConfigError = 2,
  kConvergenceError = 3,
  kThresholdFailure = 4,
};

/// Parses `args` (without the program name), runs the subcommand and returns
/// the exit code. Reports go to `out` and the output directory; errors go to
/// `err` as a JSON object.
int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace plstat::cli
