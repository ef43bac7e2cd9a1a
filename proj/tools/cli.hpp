#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace optics::tools {

enum ExitCode : int { kOk = 0, kValidationError = 1, kUsageError = 2 };

/// Runs one CLI invocation. `args` excludes the program name. Diagnostics go
/// to `err`; outputs go only to files named by flags.
int run(const std::vector<std::string>& args, std::ostream& err);

}  // namespace optics::tools
