#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace logcone::cli {

/// Runs one command line (without the program name). Exit codes: 0 on
/// success, 1 when an operation raises a contract error, 2 on bad usage or
/// unreadable input.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace logcone::cli
