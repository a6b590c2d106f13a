#pragma once

#include <iosfwd>

namespace misinfo::cli {

enum ExitCode : int {
  kSuccess = 0,
  kValidationFailure = 1,
  kBadInput = 2,
};

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);

}  // namespace misinfo::cli
