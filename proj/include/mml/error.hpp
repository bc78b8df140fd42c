#pragma once

#include <stdexcept>
#include <string>

namespace mml {

enum class ErrorKind {
  NonSquare,
  NonStochasticRow,
  NegativeEntry,
  NotIrreducible,
  BadParams,
  EmptySet,
  TooManyStates,
  DomainError,
  SingularSystem,
  InsufficientTrials,
  Parse,
};

/// Exit status a CLI should use for an error of this kind:
/// 2 parse, 3 validation, 4 math precondition, 5 insufficient trials.
int exit_code(ErrorKind kind);
const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace mml
