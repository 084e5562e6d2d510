#ifndef CAVITYSPEC_CLI_HPP
#define CAVITYSPEC_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace cavityspec::cli {

// One full invocation: args are the tokens after the program name.
// All output goes to the supplied streams, so tests can run commands
// in-process.  Exit codes: 0 success, 1 verification failure,
// 2 configuration error, 3 solver error.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

} // namespace cavityspec::cli

#endif
