#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ebnet::cli {

/// Runs the command line `args` (args[0] is the program name). Returns 0 on
/// success, 2 on usage errors and 1 on runtime errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ebnet::cli
