#pragma once

#include <stdexcept>
#include <string>

namespace wmi {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition on an argument was violated (bad parameter, empty input).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Two rasters that must share a shape do not.
class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

// A slice cannot be processed (constant slice, empty contour, too few white
// matter samples). The volume driver skips such slices.
class Undetectable : public Error {
 public:
  using Error::Error;
};

}  // namespace wmi
