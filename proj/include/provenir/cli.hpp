#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace provenir {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Runs the `provenir` command line. `args` excludes the program name. Data
/// goes to `out`, progress and diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace provenir
