#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace uplan::cli {

enum ExitCode : int {
  kOk = 0,
  kInvalidInput = 1,
  kLimitExceeded = 2,
  kIoFailure = 3,
};

// Runs one command line (without the program name). Structured output goes
// to out, diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace uplan::cli
