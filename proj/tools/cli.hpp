#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qdelaunay::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsage = 1,
  kNonConvergence = 2,
  kSelfcheckFailure = 3,
};

/// Entry point of the qdelaunay tool. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qdelaunay::cli
