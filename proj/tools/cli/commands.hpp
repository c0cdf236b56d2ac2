#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace everett::cli {

/// Process exit codes shared by every subcommand.
enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitUsage = 2,
  kExitIncomplete = 3,
  kExitContaminated = 4,
};

/// Runs the command line `args` (args[0] is the program name). Primary
/// output goes to `out` unless --out names a file; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Sweep worker count: EVERETT_TUNNEL_THREADS if set, else hardware threads.
unsigned default_jobs();

}  // namespace everett::cli
