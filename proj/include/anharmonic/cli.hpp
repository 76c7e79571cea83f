#pragma once

// Command-line front end. `run` takes the arguments after the program name
// and returns what a process would print and exit with.

#include <string>
#include <vector>

namespace anharmonic::cli {

struct RunResult {
  int exit_code = 0;
  std::string out;
  std::string err;
};

/// Exit codes: 0 success, 1 non-convergence, 2 argument or domain error.
RunResult run(const std::vector<std::string>& args);

}  // namespace anharmonic::cli
