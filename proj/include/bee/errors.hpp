#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace bee {

/// Precondition violated by a caller-supplied value.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Operation not valid in the object's current state (empty buffer, step after termination).
class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A loss or update produced NaN/Inf.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, int layer = -1, long step = -1);

  int layer() const { return layer_; }
  long step() const { return step_; }

 private:
  int layer_;
  long step_;
};

/// The environment lacks a feature the caller requires (e.g. state injection).
class CapabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Configuration rejected; carries every violated field, not just the first.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(std::vector<std::string> violations);

  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

}  // namespace bee
