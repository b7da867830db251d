#pragma once

#include <stdexcept>
#include <string>

namespace chernum {

// Exception hierarchy. Each leaf maps onto one CLI exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input, bad arguments, dimension mismatches. Exit code 2.
class InputError : public Error {
 public:
  using Error::Error;
};

// Path failures, ill-conditioned solves, inconsistent path counts. Exit code 3.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

// The input does not define Z disjoint union a finite scheme (junk component). Exit code 4.
class AssumptionViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace chernum
