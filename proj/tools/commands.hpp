#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gadforge::cli {

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kConfigError = 3,
  kParseError = 4,
  kIoError = 5,
  kContractError = 6,
  kSaturationError = 7,
  kSplitError = 8,
  kInjectionError = 9,
  kMetricError = 10,
  kNumericError = 11,
  kGradCheckFailed = 12,
};

/// Parses `args` (without the program name) and runs one subcommand.
/// Diagnostics go to `err`, reports to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gadforge::cli
