#pragma once

#include <string>
#include <vector>

namespace fraccont::cli {

// Parse and dispatch one command; returns the process exit code.
//   0  success
//   1  solver failure (the propagated error name is printed)
//   2  validation / usage error (the offending key is named)
int run(const std::vector<std::string>& args);

} // namespace fraccont::cli
