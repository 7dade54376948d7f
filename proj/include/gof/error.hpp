#pragma once

#include <stdexcept>
#include <string>

namespace gof {

// Base of every error raised by the library. The CLI maps subclasses onto
// exit codes, so keep the hierarchy flat.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid model parameters (sigma <= 0, lambda <= 0, b <= a, bad knots).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Malformed user input: empty samples, unreadable files, shape mismatches.
class InputError : public Error {
 public:
  using Error::Error;
};

// A sample whose argmax location sits on 0 or 1. Has probability zero under
// a continuous null.
class DegenerateSampleError : public Error {
 public:
  using Error::Error;
};

// The requested statistic/method combination is not available.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

// A series evaluation did not reach its tolerance within the term budget.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace gof
