#pragma once

#include <iosfwd>

namespace susy::cli {

enum ExitCode : int {
  kOk = 0,
  kVerifyFailed = 1,
  kUsage = 2,
  kNumerics = 3,
  kInconsistent = 4,
  kDegenerate = 5,
};

/// Runs one command. Output goes to `out` unless --out names a file; diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace susy::cli
