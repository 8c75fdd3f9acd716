#pragma once

#include <stdexcept>
#include <string>

namespace gaussmem {

// Iterative solver failed to converge or could not bracket a solution.
class solver_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Requested problem size exceeds the configured cap (GAUSSMEM_MAX_N).
class resource_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gaussmem
