#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace psdrank::cli {

// Exit codes: 0 ok, 1 numerical failure, 2 usage, 3 infeasible or degenerate input.
inline constexpr int kExitOk = 0;
inline constexpr int kExitNumerical = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInput = 3;

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace psdrank::cli
