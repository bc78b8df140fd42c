#include "mml/error.hpp"

namespace mml {

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse:
      return 2;
    case ErrorKind::NonSquare:
    case ErrorKind::NonStochasticRow:
    case ErrorKind::NegativeEntry:
      return 3;
    case ErrorKind::InsufficientTrials:
      return 5;
    default:
      return 4;
  }
}

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonSquare: return "NonSquare";
    case ErrorKind::NonStochasticRow: return "NonStochasticRow";
    case ErrorKind::NegativeEntry: return "NegativeEntry";
    case ErrorKind::NotIrreducible: return "NotIrreducible";
    case ErrorKind::BadParams: return "BadParams";
    case ErrorKind::EmptySet: return "EmptySet";
    case ErrorKind::TooManyStates: return "TooManyStates";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::InsufficientTrials: return "InsufficientTrials";
    case ErrorKind::Parse: return "Parse";
  }
  return "Unknown";
}

}  // namespace mml
