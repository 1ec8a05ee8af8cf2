#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ifrci::cli {

// Parses argv (without the program name), runs the subcommand, writes the
// report to `out` and diagnostics to `err`.
// Exit status: 0 success, 2 invalid or missing arguments, 3 numerical
// failure, 4 domain error ("no positives").
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace ifrci::cli
