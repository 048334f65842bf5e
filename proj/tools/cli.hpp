#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace streamrelay::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kIo = 3,
  kInfeasible = 4,
  kVerificationFailed = 5,
};

/// Runs the command line `args` (without the program name) and returns the
/// process exit status. Normal output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace streamrelay::cli
