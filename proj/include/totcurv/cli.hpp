#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace totcurv {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kExitOk = 0, kExitUsage = 2, kExitPipeline = 3 };

/// Runs the `totcurv` command line. args excludes the program name.
/// Metric values go to `out` as key=value lines; diagnostics, the resolved
/// configuration and usage text go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace totcurv
