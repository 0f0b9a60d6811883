#pragma once

#include <stdexcept>
#include <string>

namespace qcrb {

enum class ErrorKind {
  Usage,
  Hermiticity,
  Parameter,
  SupportMismatch,
  Capacity,
  UnsupportedFamily,
  Truncation,
  SingularMatrix,
  SingularState,
  DegenerateOutcome,
  InfeasiblePovm,
  OracleFailure,
  SearchFailure,
  NonConvergence,
};

const char* to_string(ErrorKind kind);

// Process exit status for the CLI: 1 usage, 2 domain/parameter, 3 numeric/search.
int exit_code(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Carries the best objective reached before giving up.
class OracleFailure : public Error {
 public:
  OracleFailure(const std::string& what, double best_so_far)
      : Error(ErrorKind::OracleFailure, what), best_so_far_(best_so_far) {}

  double best_so_far() const noexcept { return best_so_far_; }

 private:
  double best_so_far_;
};

}  // namespace qcrb
