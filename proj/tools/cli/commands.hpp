#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "config.hpp"

namespace arithdyn::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitMath = 3;
inline constexpr int kExitIo = 4;

inline constexpr const char* kCacheDirEnv = "ARITHDYN_CACHE_DIR";

// Runs cfg.command; artifacts go to the configured paths or `out`,
// diagnostics to `err`. Returns the process exit status.
int run_command(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);

// Full command line including the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

std::string artifact_version();

}  // namespace arithdyn::cli
