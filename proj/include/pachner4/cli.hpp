#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pachner4 {

inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Runs one subcommand. `args` includes the program name. The JSON run
/// report goes to `out`, usage text and input errors to `err`.
///
/// Subcommands: inspect, realize, check-flat, verify-identities, jacobian,
/// move, invariant, compare. Returns kExitPass when every check of the
/// command passes, kExitCheckFailed when one fails or the computation is
/// not defined for the input, kExitUsage for bad arguments or unreadable
/// input.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pachner4
