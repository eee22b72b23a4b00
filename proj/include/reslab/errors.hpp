#pragma once

#include <stdexcept>
#include <string>

namespace reslab {

// Invalid input: bad geometry, malformed config, out-of-range index.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical procedure failed (singular solve, step-size underflow, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace reslab
