#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace nic::cli {

inline constexpr int kExitSolved = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitInfeasible = 2;
inline constexpr int kExitIterationLimit = 3;

/// Entry point of the `nic` tool. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nic::cli
