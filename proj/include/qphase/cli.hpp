#pragma once

#include <iosfwd>

namespace qphase::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitNumericError = 3;

// Full command-line entry point: parses argv (merging --config JSON, with
// explicit flags winning), dispatches to the compute / optimize / sweep /
// scaling commands, and maps errors to exit codes. `out` receives the
// command's payload when no --output path is given; diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace qphase::cli
