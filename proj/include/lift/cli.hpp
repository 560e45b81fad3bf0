#pragma once
// Command line entry point: generate, shuffle, lift, eval, sweep, stats.
// Exposed as a function of argv so tests can drive it in-process.
// Exit codes: 0 success, 1 validation error, 2 I/O error.

#include <ostream>
#include <string>
#include <vector>

namespace lift {

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace lift
