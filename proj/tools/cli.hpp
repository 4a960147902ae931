#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace epsreg::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitFailure = 3;

/// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "EPSREG_OUTPUT_DIR";

/// Entry point of the `epsreg` tool. Subcommands: solve, sweep,
/// alpha-study, rerun. Returns 0, 2 (bad flags) or 3 (solver failure).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Convenience overload; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace epsreg::cli
