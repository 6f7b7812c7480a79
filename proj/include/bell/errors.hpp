#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bell {

/// Input violates an operation precondition (bad dimension, invalid state, ...).
struct invalid_input_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Requested object exceeds the configured size cap.
struct capacity_error : std::length_error {
  using std::length_error::length_error;
};

/// An exact algebraic identity failed beyond tolerance; indicates a bug, not bad data.
struct identity_violation_error : std::logic_error {
  using std::logic_error::logic_error;
};

/// Requested target value cannot be realized (e.g. mean outside the spectral range).
struct infeasible_error : std::domain_error {
  using std::domain_error::domain_error;
};

/// Text input rejected; `position` is the byte offset of the offending character.
struct parse_error : std::runtime_error {
  std::size_t position;
  parse_error(const std::string& what, std::size_t pos)
      : std::runtime_error(what + " (at position " + std::to_string(pos) + ")"),
        position(pos) {}
};

}  // namespace bell
