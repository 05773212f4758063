#pragma once

#include <array>
#include <vector>

#include "qhi/quantum.hpp"
#include "qhi/tensornet.hpp"

namespace qhi {

struct StateSumOptions {
  TensorRoute route = TensorRoute::Structured;
  PlanMethod method = PlanMethod::Auto;
  double budget = 1e8;  // elements of the largest intermediate tensor
};

struct StateSumResult {
  int N = 0;
  RootSystem roots;
  ScaledComplex psi;     // full contraction of the tensors
  ScaledComplex weight;  // N^{-V} prod over edges off H of x^{(N-1)/N}
  ScaledComplex h, k;    // h = psi * weight, k = h^N
  int vertices = 0;
  ContractionPlan plan;
  double seconds = 0;
};

// Legs of tet t are the quotient face classes opposite branch positions 0..3.
std::vector<std::vector<int>> networkLegs(const Triangulation& T, const std::vector<Branching>& b);

std::vector<StateTensor> stateTensors(const Triangulation& T, const Decoration<Complex>& D, const RootSystem& R,
                                      TensorRoute route = TensorRoute::Structured);

ContractionPlan planStateSum(const Triangulation& T, const std::vector<Branching>& b, int N, double budget = 1e8,
                             PlanMethod method = PlanMethod::Auto);

ScaledComplex stateWeight(const Triangulation& T, const Decoration<Complex>& D, const RootSystem& R);

// Throws FormulaDomain, NotFull, EvenN, BudgetExceeded.
StateSumResult evaluate(const Triangulation& T, const Decoration<Complex>& D, const RootSystem& R,
                        const StateSumOptions& opt = {});

// Sum over all N^{#faces} states in face-lexicographic order. Only for tiny complexes.
ScaledComplex evaluateNaive(const Triangulation& T, const Decoration<Complex>& D, const RootSystem& R);

// A D-tetrahedron carrying the multiplicities of its vertex, edge and face slots in the
// formal sum, plus the identification labels those multiplicities count.
struct AugmentedTetrahedron {
  DecoratedTetrahedron<Complex> d;
  std::array<int, 4> vertexLabel{}, v0{};  // per local vertex
  std::array<int, 6> edgeLabel{}, v1{};    // per local edge
  std::array<bool, 6> inH{};
  std::array<int, 4> faceLabel{}, v2{};    // per local face
};

std::vector<AugmentedTetrahedron> augment(const Triangulation& T, const Decoration<Complex>& D);

// prod over vertex slots N^{-1/v0}
ScaledComplex phiFactor(const AugmentedTetrahedron& a, int N);
// prod over edge slots off H of exp((N-1)/(v1 N) log x)
ScaledComplex omegaFactor(const AugmentedTetrahedron& a, const RootSystem& R);

// Tensors times their Phi and Omega factors, contracted along equal face labels.
// Throws MultiplicityMismatch if a multiplicity disagrees with its label count.
ScaledComplex evaluateAugmented(const std::vector<AugmentedTetrahedron>& terms, const RootSystem& R,
                                const StateSumOptions& opt = {});

}  // namespace qhi
