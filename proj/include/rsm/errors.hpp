#pragma once

#include <stdexcept>
#include <string>

namespace rsm {

// Caller passed arguments outside an operation's contract.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input is geometrically invalid (degenerate triangle, angle out of range, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A resource guard tripped or a prerequisite table is too short.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rsm
