#pragma once

#include <stdexcept>

namespace wagefloor {

// Iteration caps exceeded, non-finite values, and similar numerical failures.
struct solver_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Unreadable inputs and failed output writes.
struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace wagefloor
