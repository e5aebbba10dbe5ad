#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace statedeg {

/// Exit codes: 0 every verdict conclusive, 2 some verdict inconclusive,
/// 1 usage, I/O or validation error.
inline constexpr int kExitConclusive = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitInconclusive = 2;

/// Runs the command line `args` (without the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

} // namespace statedeg
