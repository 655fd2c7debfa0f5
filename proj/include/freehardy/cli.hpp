#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace freehardy::cli {

inline constexpr const char* kToolName = "freehardy";
inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kInputError = 1, kFail = 2 };

/// Runs one subcommand. The JSON report goes to `out` (or to --out, written
/// atomically); diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace freehardy::cli
