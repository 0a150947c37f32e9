#pragma once

#include <iosfwd>

namespace affine2f {

// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUnexpected = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitHypothesis = 3;
inline constexpr int kExitNumerical = 4;

// Parses argv and runs one subcommand; reports go to `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace affine2f
