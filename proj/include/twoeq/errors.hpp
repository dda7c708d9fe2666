#pragma once

#include <stdexcept>
#include <string>

namespace twoeq {

/// Argument outside the domain of a model function ([0,1] or [-1,1]).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Parameters or configuration violate a stated invariant.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An internal constraint that valid parameters guarantee was broken.
class ConstraintError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace twoeq
