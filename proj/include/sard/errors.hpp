#pragma once

#include <stdexcept>
#include <string>

namespace sard {

/// Bad arguments: grid too small, t outside (0,1), malformed windows, shape
/// mismatches. Maps to CLI exit code 2.
class InvalidInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The singular point t fell on (or within tolerance of) a grid node, which
/// the rule construction excludes. Maps to CLI exit code 3.
class NodeCollisionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Adaptive integration could not reach the requested tolerance within its
/// subdivision budget.
class AccuracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A pivot collapsed during dense factorization.
class SingularSystemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Requested an analytic reference from a catalog entry that only has a
/// numeric one.
class ReferenceUnavailableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sard
