#pragma once

#include <stdexcept>
#include <string>

namespace slrank {

// Bad parameters or mismatched operands (CLI exit code 2).
class usage_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A configured size cap would be exceeded (CLI exit code 3).
class resource_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Floating-point procedure failed to validate, e.g. eigenvalue separation.
class numeric_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace slrank
