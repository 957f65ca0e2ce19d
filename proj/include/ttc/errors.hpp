#pragma once

#include <stdexcept>
#include <string>

namespace ttc {

// Bad parameters or command usage. The CLI maps this to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unusable input data. The CLI maps this to exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public DataError {
 public:
  using DataError::DataError;
};

// Input exists but is not in the expected format (e.g. mostly-garbage file).
class FormatError : public DataError {
 public:
  using DataError::DataError;
};

// Mismatched series lengths / matrix shapes.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace ttc
