#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace polybound::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitSolver = 2,
  kExitVerify = 3,
};

/// Runs one command line. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace polybound::cli
