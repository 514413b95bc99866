#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace odmetric {

inline constexpr int kExitOk = 0;
inline constexpr int kExitGateFailed = 1;
inline constexpr int kExitInputError = 2;

// Entry point shared by the executable and the tests. `args` excludes the
// program name; the first element is the subcommand.
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace odmetric
