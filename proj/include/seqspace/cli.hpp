#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "seqspace/error.hpp"

namespace seqspace::cli {

enum ExitCode : int {
  kOk = 0,
  kVerifyFailure = 1,
  kParseError = 2,
  kUnsound = 3,
  kPrecondition = 4,
};

int exit_code_for(ErrorKind kind) noexcept;

/// Runs one command line; args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace seqspace::cli
