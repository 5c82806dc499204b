#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rank1check::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Runs the command line `args` (without the program name). Results go to
/// `out`, diagnostics to `err`; "-" or a missing file argument reads `in`.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace rank1check::cli
