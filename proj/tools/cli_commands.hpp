#pragma once

#include <iosfwd>

namespace irislab::cli {

enum ExitCode : int {
  kSuccess = 0,
  kFailure = 1,
  kInvalidParams = 2,
  kNoCycle = 3,
};

/// Parses argv (argv[0] is the program name) and runs one subcommand. Output
/// goes to --out when given, otherwise to out; diagnostics go to err.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace irislab::cli
