#pragma once

// The grayhilbert command line, as a library so tests can drive it.

#include <ostream>
#include <string>
#include <vector>

namespace grayhilbert::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,   // unexpected internal error
  kUsage = 2,     // bad flags or arguments
  kData = 3,      // unreadable or unsuitable input, unknown point id
  kContract = 4,  // parameters outside a module's preconditions
};

/// Runs one command. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace grayhilbert::cli
