#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cdcform/error.hpp"

namespace cdcform {

/// Exit codes of the command-line front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitInputError = 1,
  kExitPrecondition = 2,
  kExitVerificationFailed = 3,
  kExitResourceCap = 4,
};

int exit_code_for(ErrorCode code);

/// args excludes the program name. Reports go to err.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err);

}  // namespace cdcform
