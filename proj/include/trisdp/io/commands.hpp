#pragma once

#include <ostream>

namespace trisdp::io {

/// Exit codes shared by all subcommands.
enum ExitCode : int {
  kExitFeasible = 0,
  kExitWitness = 1,
  kExitUndecided = 2,
  kExitUsage = 64,
  kExitData = 65,
};

/// Entry point of the trisdp command line tool. Result files go to --out or
/// `out`, the human-readable summary to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace trisdp::io
