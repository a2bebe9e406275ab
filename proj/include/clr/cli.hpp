#pragma once

#include <string>
#include <vector>

namespace clr {

// Full command-line surface; args excludes the program name. Returns the
// process exit code: 0 ok, 1 runtime failure, 2 invalid input.
int run_cli(const std::vector<std::string>& args);

}  // namespace clr
