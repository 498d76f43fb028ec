#ifndef MIRROR_TOOLS_COMMANDS_HPP
#define MIRROR_TOOLS_COMMANDS_HPP

#include <string>
#include <vector>

namespace mirror::cli {

// Exit codes: 0 every check passed, 1 a check failed, 2 bad input.
inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

/// Runs the command line `args` (args[0] is the program name).
int run(const std::vector<std::string>& args);

}  // namespace mirror::cli

#endif  // MIRROR_TOOLS_COMMANDS_HPP
