#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace polytok::cli {

// Runs the polytok command line with `args` (excluding the program name).
// Returns the process exit code: 0 success, 2 invalid input, 3 runtime failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace polytok::cli
