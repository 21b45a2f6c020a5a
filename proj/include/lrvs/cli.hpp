#pragma once

#include <ostream>

namespace lrvs {

inline constexpr const char* kVersion = "0.1.0";

/// Environment variable naming the default output directory.
inline constexpr const char* kOutDirEnv = "LRVS_OUT_DIR";

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitData = 2, kExitRuntime = 3 };

/// Entry point shared by the lrvs binary and the tests. Subcommands: ingest,
/// run, analyze, superdistrict.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lrvs
