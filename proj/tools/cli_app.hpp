#pragma once

#include <ostream>

namespace gaussmem::cli {

// Runs the full command-line interface. Returns the process exit code:
// 0 success, 1 domain error, 2 solver/resource failure, 64 usage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gaussmem::cli
