#pragma once

namespace ffmop::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerification = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

// Parses arguments, runs one command, prints its RunRecord to stdout and
// returns the process exit code.
int run(int argc, char** argv);

}  // namespace ffmop::cli
