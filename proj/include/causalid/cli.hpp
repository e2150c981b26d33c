#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace causalid::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kNotIdentifiable = 2,
  kToleranceExceeded = 3,
};

// Runs the command line `args` (args[0] is the program name). Returns the
// process exit code.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace causalid::cli
