#pragma once

#include <stdexcept>
#include <string>

namespace hartree {

/// Invalid input: bad sizes, non-finite data, parameters outside their admissible range.
class ValidationError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Reading or writing an artifact failed.
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace hartree
