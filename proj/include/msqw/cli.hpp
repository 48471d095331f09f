#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace msqw::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Subcommands: gen, solve, scan, compare, scaling, profile.
int run(int argc, char** argv);

/// Same as above with explicit argument list (program name excluded) and streams.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace msqw::cli
