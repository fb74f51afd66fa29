#pragma once

#include <stdexcept>
#include <string>

namespace cyclobox {

// Two operands live in different cyclotomic fields (their primes differ).
class FieldMismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An operation is undefined at the given point (zero vector for an angle,
// identical endpoints for visibility, ...).
class DegenerateError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A size or feasibility guard refused the request (oracle prime too large,
// render budget exceeded, sampler attempts exhausted).
class GuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cyclobox
