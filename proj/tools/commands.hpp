#pragma once

#include <iosfwd>
#include <string>

#include "polylap/config.hpp"

namespace polylap::cli {

enum ExitCode : int { kOk = 0, kValidation = 1, kSolver = 2, kIo = 3 };

struct Invocation {
  std::string command;
  std::string out_dir = "polylap_out";
  bool dry_run = false;
};

/// Runs one subcommand.  Exceptions propagate; main() maps them to exit codes.
void run_command(const Invocation& inv, RunConfig& config, std::ostream& log);

}  // namespace polylap::cli
