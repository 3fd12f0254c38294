#ifndef TWRAOI_COMMANDS_HPP_
#define TWRAOI_COMMANDS_HPP_

#include "twraoi/scenario.hpp"

namespace twraoi {

struct RunOptions {
  bool print_config = false;
  unsigned threads = 0;  // 0 = hardware concurrency
};

// Prepares the scenario for the command, runs it, writes the output artifact,
// and prints a short summary to stdout. Returns the process exit code:
// 0 success, 2 infeasible problem. Configuration errors propagate as
// std::invalid_argument for the caller to map to exit code 1.
int run_command(Command command, Scenario scenario, const RunOptions& options);

}  // namespace twraoi

#endif  // TWRAOI_COMMANDS_HPP_
