#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace isoperim::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kFailed = 1;  // failed or inconclusive
inline constexpr int kUsage = 2;   // bad flags, unknown claim, unreadable input

// Runs the command line `args` (without the program name). Reads
// ISOPERIM_PRECISION from the environment; a --precision flag wins.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace isoperim::cli
