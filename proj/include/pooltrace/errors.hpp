#pragma once

#include <stdexcept>
#include <string>

namespace pooltrace {

/// Invalid argument or precondition violation.
class ParameterError : public std::invalid_argument {
 public:
  explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

/// A computation left the representable range (e.g. normalizer underflow).
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

/// The request is valid but too large for the chosen method.
class RefusalError : public std::runtime_error {
 public:
  explicit RefusalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pooltrace
