#ifndef ARBO_CLI_HPP
#define ARBO_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace arbo {

/// Runs one CLI invocation. Exit codes: 0 accept/ok, 1 mathematical
/// rejection with witness, 2 input or usage error.
int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err);

}  // namespace arbo

#endif
