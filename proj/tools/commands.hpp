#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mpoxdash::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kOk = 0, kUsage = 1, kPartial = 2 };

/// Parses `args` (args[0] is the program name) and runs the chosen
/// subcommand. Reports go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mpoxdash::cli
