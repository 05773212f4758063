#pragma once

#include <stdexcept>
#include <string>

namespace qhi {

enum class ErrorKind {
  UnpairedFace,
  InconsistentVertexMap,
  SelfPairedFace,
  NonOrientable,
  CoherentFace,
  NoTotalOrder,
  InvalidDecoration,
  NonBrancheable,
  FullnessLost,
  NotAdjacent,
  BadValence,
  HamiltonianEdge,
  InvalidSite,
  NoValidCharge,
  DegenerateModuli,
  DegenerateModulus,
  NotFull,
  NoSolution,
  EvenN,
  PoleHit,
  ConstraintViolated,
  FormulaDomain,
  Overflow,
  BudgetExceeded,
  MultiplicityMismatch,
  PhaseUnwrapFailure,
  ParseError,
  InvalidArgument,
};

const char* errorName(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

}  // namespace qhi
