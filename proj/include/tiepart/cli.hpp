#pragma once

#include <iosfwd>

namespace tiepart::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_failure = 1;
inline constexpr int exit_usage = 2;

/// Runs the command line tool with the given arguments (argv[0] is the
/// program name). Normal output goes to out, diagnostics to err.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace tiepart::cli
