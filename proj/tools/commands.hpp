#pragma once

#include <string>
#include <vector>

namespace uh::cli {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitCertification = 2;

// Runs one command line (without the program name); returns the exit code.
int run_cli(const std::vector<std::string>& args);

}  // namespace uh::cli
