#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace thoma::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Runs the command line `args` (args[0] is the program name). Results go to
/// `out` unless --output is given; progress and diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Identifier of the source tree the binary was built from.
const char* build_id() noexcept;

}  // namespace thoma::cli
