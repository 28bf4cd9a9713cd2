#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ramdiv::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNonFinite = 2;

/// Entry point of the `ramdiv` tool. `args` excludes the program name.
/// Subcommands: estimate, synthetic, rates, check-lemmas.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ramdiv::cli
