#ifndef ZGFF_ERRORS_HPP
#define ZGFF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace zgff {

// Error categories. The CLI maps them onto process exit codes
// (config -> 2, infeasible/degenerate -> 3, resource -> 4).

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input data: missing boundary values, bad sizes, corrupt files.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Contradictory constraints, e.g. floor above ceiling.
class ConstraintError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Infeasible or degenerate request (no paths, empty samples, ...).
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

class ResourceLimitError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace zgff

#endif  // ZGFF_ERRORS_HPP
