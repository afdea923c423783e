#pragma once

#include <stdexcept>
#include <string>

namespace topostab {

// Malformed input or a violated precondition. CLI exit status 1.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A computation would exceed a configured size budget. CLI exit status 2.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A property that must hold unconditionally was observed to fail. This points
// at a bug in this library, never at the input. CLI exit status 2.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace topostab
