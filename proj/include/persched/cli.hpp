#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace persched::cli {

// Runs one CLI invocation (args exclude the program name). Returns the
// process exit code: 0 success, 2 usage or unknown input, 1 internal failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace persched::cli
