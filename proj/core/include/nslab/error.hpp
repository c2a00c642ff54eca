#pragma once

#include <stdexcept>
#include <string>

namespace nslab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on the arguments of an operation does not hold.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Two fields (or a field and an operator) live on different grids.
class GridMismatch : public Error {
 public:
  using Error::Error;
};

/// Integration produced non-finite values.
class NumericalAbort : public Error {
 public:
  using Error::Error;
};

}  // namespace nslab
