#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gepd::cli {

/// Exit codes of the gepd tool.
enum ExitCode : int { kSuccess = 0, kUsage = 1, kDataError = 2, kInvariant = 3 };

/// Runs the tool on args (without the program name). Results go to out,
/// diagnostics to err. Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gepd::cli
