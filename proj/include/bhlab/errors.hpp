#pragma once

#include <stdexcept>
#include <string>

namespace bhlab {

// Raised when an input violates a documented precondition: wrong dimensions,
// values off the required grid, empty sets where nonempty ones are needed,
// parameters outside their domain.  Maps to CLI exit code 2.
class input_error : public std::runtime_error {
 public:
  explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a computation would exceed a configured size cap (group order,
// tuple length, scan budget, subset-enumeration limit, ...).  The message
// names the cap and, where useful, the partial state reached.  Maps to CLI
// exit code 3.
class cap_error : public std::runtime_error {
 public:
  explicit cap_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace bhlab
