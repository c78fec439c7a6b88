#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace toca::cli {

// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitSolver = 3;
inline constexpr int kExitRefused = 4;

// Entry point behind the `toca` binary. Reports go to `out` unless --out is
// given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace toca::cli
