#pragma once

#include <stdexcept>
#include <string>

namespace repsel {

/// Raised when inputs violate a documented precondition (bad sizes, bad
/// files, out-of-range budgets). The CLI maps these to exit code 1.
class validation_error : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a computation cannot complete (enumeration budget, I/O).
/// The CLI maps these to exit code 2.
class runtime_failure : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool condition, const std::string& message) {
    if (!condition) throw validation_error(message);
}

}  // namespace detail

}  // namespace repsel
