#pragma once

#include <ostream>

namespace ideageo::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 2;
inline constexpr int exit_data = 3;

// Runs one subcommand: embed, allocate, analyze, terrain or synth.
// Returns exit_ok, exit_usage (bad flags or parameters) or exit_data.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ideageo::cli
