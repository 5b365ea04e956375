#pragma once

#include <string>
#include <vector>

namespace depnet {

// Entry point behind the `depnet` binary. Exit codes: 0 success, 2 input
// error, 3 empty/degenerate input, 4 numerical non-convergence.
int run_cli(const std::vector<std::string>& args);

}  // namespace depnet
