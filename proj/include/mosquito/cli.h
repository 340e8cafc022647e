#pragma once

#include <iosfwd>

namespace mosquito::cli {

enum ExitCode : int {
  kSuccess = 0,
  kConfigError = 1,
  kIoError = 2,
  kFalsified = 3,
  kInternalError = 4,
};

/// Entry point of the `mosquito` tool. argv[0] is the program name.
/// Normal output goes to `out`; diagnostics are single lines on `err`.
int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);

}  // namespace mosquito::cli
