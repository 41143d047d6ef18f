#pragma once

#include <string>
#include <vector>

namespace kograd {

/// Command-line entry point (subcommands: check, solve, classify,
/// supersolution, sweep). Returns the process exit code:
///   0  success (verdict-independent)
///   2  malformed problem/config/grid file or bad usage
///   3  internal numeric failure
///   4  step collapse without a blow-up signature (solve)
///   5  supersolution requested but the Gamma condition fails
int run_cli(int argc, const char* const* argv);

/// Convenience for tests: argv without the program name.
int run_cli(const std::vector<std::string>& args);

}  // namespace kograd
