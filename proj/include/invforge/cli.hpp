#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace invforge {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 2;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitIo = 74;

inline constexpr std::uint64_t kDefaultSeed = 20240611;

/// Subcommand names in dispatch order.
const std::vector<std::string>& cli_commands();

/// Runs one invocation; `args` excludes the program name. Reports go to
/// `out`, diagnostics to `err`. Returns the process exit status.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace invforge
