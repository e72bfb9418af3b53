#pragma once

#include <stdexcept>
#include <string>

namespace zipfkit {

// Validation failure: bad input, violated precondition, degenerate data.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace zipfkit
