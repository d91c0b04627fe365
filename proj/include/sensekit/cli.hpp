#pragma once

#include <iosfwd>

namespace sensekit {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,
    kExitUsage = 2,
    kExitResource = 3,
};

/// Entry point of the `sensekit` tool with explicit streams.
/// Subcommands: disambiguate, evaluate, inspect, serve, serve-vectors.
int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace sensekit
