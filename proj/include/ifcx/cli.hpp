#pragma once

#include <string>
#include <vector>

namespace ifcx::cli {

// Runs one CLI invocation. args excludes the program name.
// Exit status: 0 success, 1 usage or input error, 2 numerical failure.
int run(const std::vector<std::string>& args);

}  // namespace ifcx::cli
