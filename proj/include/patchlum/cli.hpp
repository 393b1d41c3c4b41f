#pragma once

// Command-line surface. args holds the tokens after the program name.
// Exit codes: 0 success, 1 validation error, 2 numerical failure; errors are
// reported as one machine-parsable line on the diagnostic stream.

#include <string>
#include <vector>

namespace patchlum {

int run_cli(const std::vector<std::string>& args);

}  // namespace patchlum
