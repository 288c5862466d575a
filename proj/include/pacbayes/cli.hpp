#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pacbayes::cli {

// Exit status: 0 success, 1 validation error, 2 runtime or numerical error.
enum Status : int { ok = 0, validation_error = 1, runtime_error = 2 };

// args excludes the program name. Diagnostics go to err as one line.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pacbayes::cli
