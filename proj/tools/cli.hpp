#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace skinspec::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsage = 2,
  kDataValidation = 3,
  kNumerical = 4,
};

// Environment variable consulted for the default eval worker count.
inline constexpr const char* kWorkersEnv = "SKINSPEC_WORKERS";

// Entry point shared by the executable and the tests. args[0] is the
// program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace skinspec::cli
