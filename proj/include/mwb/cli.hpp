#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mwb {

// Runs one command-line invocation (arguments without the program name)
// against the given streams and returns the exit code:
//   0  success, or a verdict/report with nothing violated
//   1  a violation, rejection or runtime failure
//   2  usage or input syntax errors
// Reports are deterministic functions of the arguments, seeds included.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace mwb
