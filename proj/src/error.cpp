#include "qcrb/error.hpp"

namespace qcrb {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Usage: return "usage error";
    case ErrorKind::Hermiticity: return "hermiticity error";
    case ErrorKind::Parameter: return "parameter error";
    case ErrorKind::SupportMismatch: return "support-mismatch error";
    case ErrorKind::Capacity: return "capacity error";
    case ErrorKind::UnsupportedFamily: return "unsupported-family error";
    case ErrorKind::Truncation: return "truncation-insufficient error";
    case ErrorKind::SingularMatrix: return "singular-matrix error";
    case ErrorKind::SingularState: return "singular-state error";
    case ErrorKind::DegenerateOutcome: return "degenerate-outcome error";
    case ErrorKind::InfeasiblePovm: return "infeasible-povm error";
    case ErrorKind::OracleFailure: return "oracle-failure error";
    case ErrorKind::SearchFailure: return "search-failure error";
    case ErrorKind::NonConvergence: return "non-convergence error";
  }
  return "error";
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Usage:
      return 1;
    case ErrorKind::Hermiticity:
    case ErrorKind::Parameter:
    case ErrorKind::SupportMismatch:
    case ErrorKind::Capacity:
    case ErrorKind::UnsupportedFamily:
    case ErrorKind::Truncation:
    case ErrorKind::SingularState:
      return 2;
    case ErrorKind::SingularMatrix:
    case ErrorKind::DegenerateOutcome:
    case ErrorKind::InfeasiblePovm:
    case ErrorKind::OracleFailure:
    case ErrorKind::SearchFailure:
    case ErrorKind::NonConvergence:
      return 3;
  }
  return 3;
}

}  // namespace qcrb
