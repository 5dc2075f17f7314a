#pragma once

#include <string>
#include <vector>

namespace skelxai {

// Command-line entry point shared by the binary and the tests. `args`
// excludes the program name. Subcommands: gen-data, train, explain,
// evaluate, report. Returns the process exit code; all failures print a
// one-line cause to stderr and return nonzero.
int run_cli(const std::vector<std::string>& args);

}  // namespace skelxai
