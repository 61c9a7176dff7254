#pragma once

#include <iosfwd>

namespace rbv {

/// Exit codes of run_cli.
enum ExitCode : int { kExitOk = 0, kExitCellFailure = 1, kExitConfigError = 2 };

/// Entry point behind the `rbv` executable; subcommands norms, approx-rate,
/// horizon-approx, train, experiment and report.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rbv
