#pragma once

#include <stdexcept>
#include <string>

namespace sppic {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed documents, invariant violations in user input, violated preconditions.
class InputError : public Error {
 public:
  using Error::Error;
};

// A certificate did not hold: an axiom check, a stability re-check, a verifier.
// Usually means a choice function violates (SUB)/(MON).
class VerificationError : public Error {
 public:
  using Error::Error;
};

// An exhaustive routine refused to run past its configured budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

// An internal consistency assertion failed.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace sppic
