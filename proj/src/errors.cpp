#include "qhi/errors.hpp"

namespace qhi {

const char* errorName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UnpairedFace: return "UnpairedFace";
    case ErrorKind::InconsistentVertexMap: return "InconsistentVertexMap";
    case ErrorKind::SelfPairedFace: return "SelfPairedFace";
    case ErrorKind::NonOrientable: return "NonOrientable";
    case ErrorKind::CoherentFace: return "CoherentFace";
    case ErrorKind::NoTotalOrder: return "NoTotalOrder";
    case ErrorKind::InvalidDecoration: return "InvalidDecoration";
    case ErrorKind::NonBrancheable: return "NonBrancheable";
    case ErrorKind::FullnessLost: return "FullnessLost";
    case ErrorKind::NotAdjacent: return "NotAdjacent";
    case ErrorKind::BadValence: return "BadValence";
    case ErrorKind::HamiltonianEdge: return "HamiltonianEdge";
    case ErrorKind::InvalidSite: return "InvalidSite";
    case ErrorKind::NoValidCharge: return "NoValidCharge";
    case ErrorKind::DegenerateModuli: return "DegenerateModuli";
    case ErrorKind::DegenerateModulus: return "DegenerateModulus";
    case ErrorKind::NotFull: return "NotFull";
    case ErrorKind::NoSolution: return "NoSolution";
    case ErrorKind::EvenN: return "EvenN";
    case ErrorKind::PoleHit: return "PoleHit";
    case ErrorKind::ConstraintViolated: return "ConstraintViolated";
    case ErrorKind::FormulaDomain: return "FormulaDomain";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::MultiplicityMismatch: return "MultiplicityMismatch";
    case ErrorKind::PhaseUnwrapFailure: return "PhaseUnwrapFailure";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(errorName(kind)) + ": " + what), kind_(kind) {}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace qhi
