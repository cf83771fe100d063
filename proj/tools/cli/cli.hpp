#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace boxlab::cli {

enum ExitCode : int {
  kOk = 0,
  kInvalid = 1,
  kParse = 2,
  kCapExceeded = 3,
  kInconsistent = 4,
  kPropertyFailed = 5,
};

/// Runs one command; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace boxlab::cli
