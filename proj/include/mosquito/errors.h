#pragma once

#include <stdexcept>
#include <string>

namespace mosquito {

/// Thrown when an input lies outside the mathematical domain of an operation
/// (negative densities, non-finite coordinates).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Thrown when the parameters are valid model constants but fall outside the
/// regime an analysis operation requires.
class ConfigurationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Two independent computations of the same quantity disagreed. Always a bug.
class InternalConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace mosquito
