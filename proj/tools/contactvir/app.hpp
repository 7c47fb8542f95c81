#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace contactvir {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kConfigError = 2,
  kIntegrationAbort = 3,
  kVerificationFailure = 4,
};

// Entry point of the contactvir tool; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace contactvir
