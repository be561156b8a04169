#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace adareg::cli {

/// Process exit statuses.
enum ExitCode : int {
  kOk = 0,
  kUsage = 2,     // bad flags or invalid parameter values
  kIo = 3,        // unreadable, malformed or unwritable files
  kSolver = 4,    // divergence, degenerate regions, images too small
};

/// Runs one command. `args` excludes the program name, e.g.
/// {"denoise", "--input", "a.pgm", "--output", "b.pgm"}.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace adareg::cli
