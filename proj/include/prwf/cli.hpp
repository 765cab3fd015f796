#pragma once

#include <iosfwd>

namespace prwf {

/// Exit statuses of the command-line front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitConfigError = 2,
  kExitIoError = 3,
};

/// prwf <run|sweep|init|verify> [--config FILE] [--set key=value]... [--out DIR]
///      [--threads N]
/// Diagnostics go to `err`; verify also prints its report to `out`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace prwf
