#pragma once

#include <stdexcept>
#include <string>

namespace dctfuse {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

// A fixed-point intermediate left the Q(1,10,24) range and was clamped.
class SaturationError : public Error {
 public:
  using Error::Error;
};

class ImageIoError : public Error {
 public:
  using Error::Error;
};

// The coefficient FIFO of the datapath model would have to hold more blocks
// than it was configured for.
class FifoOverflowError : public Error {
 public:
  using Error::Error;
};

}  // namespace dctfuse
