#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace defocus {

/// Exit codes of the command-line tool.
enum ExitCode : int { exit_ok = 0, exit_usage = 1, exit_numeric = 2, exit_io = 3 };

/// Runs the `defocus` command line. argv[0] is the program name. Tables go
/// to `out` unless --out is given; diagnostics go to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Convenience overload; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace defocus
