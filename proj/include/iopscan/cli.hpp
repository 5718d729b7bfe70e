#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace iopscan {

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitGate = 3;

/// Runs `iopscan <args...>` (args exclude the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace iopscan
