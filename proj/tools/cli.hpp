#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dirinfo::cli {

/// Exit codes of the dirinfo command.
enum ExitCode : int {
  kSuccess = 0,
  kUsageError = 1,
  kStabilityError = 2,
  kToleranceFailure = 3,
};

/// Runs the command line (without the program name). Reports go to out,
/// diagnostics to err. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dirinfo::cli
