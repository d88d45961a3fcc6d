#pragma once

#include <stdexcept>
#include <string>

namespace prwf {

// Invalid sizes, lengths or out-of-range tunables.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Inputs that are well-formed but carry no information (all-zero data,
// zero ground truth).
class DegenerateInputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised by the line search when no acceptable step is found.
class StagnationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace prwf
