#pragma once

#include <stdexcept>
#include <string>

namespace blochdiff {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point that should lie in the open unit disk does not.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Inputs at which a ratio or quotient is undefined (e.g. coincident points).
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

/// A truncated power series cannot meet its requested error bound.
class TruncationInsufficient : public Error {
 public:
  using Error::Error;
};

class QuadratureNonConvergence : public Error {
 public:
  using Error::Error;
};

/// The essential-norm estimate needs both single operators bounded.
class HypothesisUnmet : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace blochdiff
