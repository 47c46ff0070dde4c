#pragma once

#include <stdexcept>
#include <string>

namespace risim {

// Base of all library errors. The CLI maps NumericalError to exit code 2 and
// everything else to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Coincident points where the model divides by a distance.
class DegenerateGeometry : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

// Zero column where a normalization is required.
class DegenerateMatrix : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DivergenceError : public NumericalError {
 public:
  DivergenceError(int iteration, const std::string& what)
      : NumericalError(what), iteration_(iteration) {}
  int iteration() const noexcept { return iteration_; }

 private:
  int iteration_;
};

// Exhaustive search over more supports than the configured bound.
class TooLargeError : public Error {
 public:
  using Error::Error;
};

}  // namespace risim
