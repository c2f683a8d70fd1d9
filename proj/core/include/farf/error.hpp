#pragma once

#include <stdexcept>
#include <string>

namespace farf {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller violated an operation's precondition (bad dimensions, bad config).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A linear system could not be solved (singular normal matrix, non-finite data).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Reading or writing a file failed, or a model file is corrupt.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace farf
