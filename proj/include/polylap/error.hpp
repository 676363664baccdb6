#pragma once

#include <stdexcept>
#include <string>

namespace polylap {

/// Bad parameters or malformed input; maps to CLI exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// File or stream failures; maps to CLI exit code 3.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace polylap
