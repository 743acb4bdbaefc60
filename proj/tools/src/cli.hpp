#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace assocfam::cli {

enum ExitCode : int { kPass = 0, kSuiteFailure = 1, kConfigError = 2, kUndetermined = 3 };

/// Runs one command; `args` excludes the program name. Reports go to --out or `out`;
/// diagnostics and the family summary table go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace assocfam::cli
