#pragma once

#include <string>
#include <vector>

namespace shiftscan::cli {

/// Run the shiftscan CLI on the given arguments (without the program name).
/// Returns the process exit status: 0 success, 1 usage error, 2 data error.
int run(const std::vector<std::string>& args);

}  // namespace shiftscan::cli
