// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lfp::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,  // also a FAIL verdict from `verify`
  kSchema = 2,
  kLimit = 3,  // step/round limit or a stuck non-fixed-point
  kContract = 4,
  kDeviates = 5,
};

/// Runs one command. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lfp::cli
