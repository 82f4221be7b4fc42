#pragma once

#include <stdexcept>
#include <string>

namespace heatlab {

// Invalid or incomplete input. The CLI maps this to exit code 2.
class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Argument outside the domain where an object is defined (tabulated range, attainable F range).
class OutOfRange : public SpecError {
 public:
  using SpecError::SpecError;
};

// A computation that could not meet its tolerance. The CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class QuadratureFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// The improper integral F(u) does not converge for this f.
class DivergentTail : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace heatlab
