#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ptt::cli {

inline constexpr int kExitOptimal = 0;
inline constexpr int kExitSoftViolations = 1;
inline constexpr int kExitInfeasible = 2;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitBadInstance = 65;

/// Entry point shared by the `ptt` binary and the tests. `args` excludes the
/// program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ptt::cli
