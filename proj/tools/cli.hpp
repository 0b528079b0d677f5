#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace treeshape::cli {

enum ExitCode : int { kOk = 0, kIoError = 1, kUsage = 2, kCapExceeded = 3 };

inline constexpr const char* kExactCapEnv = "TREESHAPE_EXACT_CAP";

// Runs the command line `args` (without the program name) against the given
// streams and returns the process exit code.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace treeshape::cli
