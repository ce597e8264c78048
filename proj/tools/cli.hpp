#pragma once

#include <iosfwd>

namespace mumford::cli {

enum ExitCode : int {
  kOk = 0,
  kInputError = 1,
  kVerificationFailure = 2,
  kBudgetRefusal = 3,
};

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mumford::cli
