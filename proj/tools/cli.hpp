#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace metro::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kFailure = 2, kVerifyFail = 3 };

/// Runs the command line `args` (without the program name); returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace metro::cli
