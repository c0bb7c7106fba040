#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hpt::cli {

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,  // axiom, morphism or invariance failure
  kBadInput = 2,     // usage, parse and spec errors
};

// Runs one invocation; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hpt::cli
