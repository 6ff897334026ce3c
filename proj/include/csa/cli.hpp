#pragma once

// Command-line front end: approx, sweep, audit and multicopy subcommands.
// Exit codes: 0 success, 1 invalid input or I/O failure, 2 solver
// non-convergence (approx only; results are still written).

#include <ostream>
#include <string>
#include <vector>

namespace csa::cli {

/// Parses a real number in decimal notation or a multiple of pi such as
/// "pi/3", "-pi/4", "2pi/3" or "0.5*pi", or a fraction such as "2/3".
/// Throws std::invalid_argument.
double parse_real(const std::string& text);

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace csa::cli
