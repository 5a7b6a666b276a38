#pragma once

#include <stdexcept>
#include <string>

namespace owrf {

/// Shapes of matrices/vectors do not agree.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed or non-finite numeric input (bad matrix, bad CSV cell, bad config value).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of an operation (e.g. n = 0).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace owrf
