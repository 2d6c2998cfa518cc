#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace oql::cli {

enum ExitCode : int {
  exit_pass = 0,
  exit_negative = 1,
  exit_input_error = 2,
  exit_budget = 3,
};

/// Runs one oqlcheck command. `args` excludes the program name. The report
/// goes to `out` (or to --out), diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace oql::cli
