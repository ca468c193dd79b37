// cli.hpp -- the command-line surface
#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace avass {

/// Runs one invocation: args excludes the program name. Exit codes: 0 every
/// query decided, 2 some query undecided, 1 input or usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace avass
