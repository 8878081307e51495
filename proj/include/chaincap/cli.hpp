#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace chaincap::cli {

// Stable exit-code contract for scripting.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;    // bad flags, bad config, invariant violations
inline constexpr int kExitRuntime = 3;  // simulation, calibration or I/O failures

/// Environment variable naming the default output directory.
inline constexpr const char* kOutDirEnv = "CHAINCAP_OUT_DIR";

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chaincap::cli
