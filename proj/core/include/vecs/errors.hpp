#pragma once

#include <stdexcept>
#include <string>

namespace vecs {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A start time at or after the task deadline.
class InfeasibleStartError : public Error {
 public:
  using Error::Error;
};

/// Requested utilisation lies below the task's minimum for the given start.
class UtilisationTooLowError : public Error {
 public:
  using Error::Error;
};

/// Outcome indicators that violate z => y.
class LedgerCorruptionError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class GenerationError : public Error {
 public:
  using Error::Error;
};

class IngestionError : public Error {
 public:
  using Error::Error;
};

/// Malformed scenario / plan / log input.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A caller broke a documented precondition (e.g. eviction for a soft task).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// The engine reached a state that its own bookkeeping says is impossible.
class InternalFault : public Error {
 public:
  using Error::Error;
};

}  // namespace vecs
