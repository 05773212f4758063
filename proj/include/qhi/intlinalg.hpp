#pragma once

#include <functional>
#include <vector>

namespace qhi {

using IVec = std::vector<long long>;
using IMat = std::vector<IVec>;

struct IntegerSolution {
  bool consistent = false;
  IVec particular;
  std::vector<IVec> kernel;  // basis of the integer kernel lattice
  // when inconsistent: index of the first violated transformed equation
  int obstruction = -1;
};

// Solve A x = b over the integers by unimodular row/column elimination.
IntegerSolution solveInteger(const IMat& A, const IVec& b, int columns);

std::vector<IVec> lllReduce(std::vector<IVec> basis);

long long maxNorm(const IVec& v);

// Search x + span_Z(kernel) for the element of least max-norm (ties: lexicographic).
// accept may reject candidates (e.g. a parity condition). Throws NoSolution if every
// candidate inspected is rejected.
IVec minimizeMaxNorm(const IVec& x, const std::vector<IVec>& kernel,
                     const std::function<bool(const IVec&)>& accept = {}, int radius = 2);

}  // namespace qhi
