// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace lfp {

/// Mismatched dimensions or layouts between values that must agree.
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An update function did something its descriptor says it cannot
/// (write outside its write set, leave the lattice bounds, break i-locality).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Problem instance rejected by a family builder.
class InvalidInstance : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Exhaustive enumeration refused because the search space is too large.
class SearchSpaceTooLarge : public std::runtime_error {
 public:
  SearchSpaceTooLarge(const std::string& what, long double estimate)
      : std::runtime_error(what), estimate_(estimate) {}
  long double estimate() const noexcept { return estimate_; }

 private:
  long double estimate_;
};

}  // namespace lfp
