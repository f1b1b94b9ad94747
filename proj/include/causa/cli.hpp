#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace causa {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kExitOk = 0, kExitAnalysis = 1, kExitUsage = 2 };

/// Runs the command line `args` (without the program name), writing normal
/// output to `out` and diagnostics to `err`. Returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace causa
