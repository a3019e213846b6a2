#pragma once

#include <iosfwd>

namespace cimsolve {

/// Exit codes of run_cli.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;

/// Entry point of the command-line tool; subcommands solve, bench, oracle,
/// bp, tap, spectrum and convert. Results go to `out` (or files), usage and
/// diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cimsolve
