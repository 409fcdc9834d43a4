#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cfeq::cli {

enum ExitCode : int {
  kSuccess = 0,
  kFailure = 1,
  kUsage = 2,
  kDataError = 3,
  kNumericalError = 4,
};

/// args excludes the program name. JSON and results go to `out` (or the
/// --out file), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cfeq::cli
