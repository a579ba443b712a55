#pragma once

#include <stdexcept>
#include <string>

namespace cfc {

// Bad parameters or malformed descriptors.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DimensionMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// A body kind that does not provide the requested oracle.
class UnsupportedOracle : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a run produces something that should be impossible
// (non-finite decisions, broken invariants).
class RuntimeFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cfc
