#pragma once

#include <stdexcept>
#include <string>

namespace telegame {

// Malformed arguments: bad mode indices, non-finite amplitudes, asymmetric
// matrices, unphysical covariance.
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

// Channel parameter outside the admissible family (alpha < 1/2).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// A root finder could not locate a sign change in its search range.
class BracketError : public std::runtime_error {
 public:
  explicit BracketError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace telegame
