#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gtforge::cli {

/// Exit codes: 0 success, 1 validation failure, 2 usage or input parse error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitUsage = 2;

/// Runs the command line `args` (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gtforge::cli
