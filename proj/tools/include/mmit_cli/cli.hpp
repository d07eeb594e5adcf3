#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mmit::cli {

/// Runs one command line (without the program name) and returns the exit code.
/// Reports and data go to `out` unless a subcommand writes to a file; every
/// diagnostic goes to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mmit::cli
