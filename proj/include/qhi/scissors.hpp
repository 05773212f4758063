#pragma once

#include <vector>

#include "qhi/decoration.hpp"
#include "qhi/ideal.hpp"
#include "qhi/transit.hpp"

namespace qhi {

// Terms are labelled tetrahedra: local vertex labels travel with the data, so two terms
// compare equal under collect only when sign, branching, values and charges agree label by label.
// normalizeS4 forgets the labels.
template <class Tet>
struct Term {
  long long coef = 1;
  Tet tet;
};

template <class Tet>
struct FormalSum {
  std::vector<Term<Tet>> terms;

  long long totalCoefficient() const;
  FormalSum operator-() const;
  FormalSum& operator+=(const FormalSum& o);
};

template <class Tet>
FormalSum<Tet> operator+(FormalSum<Tet> a, const FormalSum<Tet>& b) {
  return a += b;
}
template <class Tet>
FormalSum<Tet> operator-(const FormalSum<Tet>& a, const FormalSum<Tet>& b) {
  return a + (-b);
}

template <class S>
using DSum = FormalSum<DecoratedTetrahedron<S>>;
template <class S>
using ISum = FormalSum<IdealTetrahedron<S>>;

bool sameTetrahedron(const DecoratedTetrahedron<Complex>& a, const DecoratedTetrahedron<Complex>& b, double tol);
bool sameTetrahedron(const DecoratedTetrahedron<GaussianRational>& a,
                     const DecoratedTetrahedron<GaussianRational>& b, double tol);
bool sameTetrahedron(const IdealTetrahedron<Complex>& a, const IdealTetrahedron<Complex>& b, double tol);
bool sameTetrahedron(const IdealTetrahedron<GaussianRational>& a, const IdealTetrahedron<GaussianRational>& b,
                     double tol);

// Fold every sign into the coefficient, merge equal terms, drop zeros.
template <class Tet>
FormalSum<Tet> collect(const FormalSum<Tet>& s, double tol = 1e-12);

// Canonical S4 representative of each term: the branching becomes the identity order on the
// local labels, the sign change of the action goes into the coefficient. Terms that agree after
// renaming local vertices are merged too, so the result no longer depends on labels.
template <class Tet>
FormalSum<Tet> normalizeS4(const FormalSum<Tet>& s, double tol = 1e-12);

// The permutation taking a term to its representative.
template <class Tet>
Perm4 canonicalPermutation(const Tet& t) {
  return t.b.order;
}

// a - b collects to zero
template <class Tet>
bool equivalentSums(const FormalSum<Tet>& a, const FormalSum<Tet>& b, double tol = 1e-12);

template <class S>
DSum<S> classOf(const Triangulation& T, const Decoration<S>& D);
template <class S>
ISum<S> classOf(const std::vector<IdealTetrahedron<S>>& tets);

template <class Tet>
struct FiveTermRelation {
  FormalSum<Tet> lhs;  // two-tetrahedron side
  FormalSum<Tet> rhs;  // three-tetrahedron side
  MoveRecord provenance;

  FormalSum<Tet> element() const { return lhs - rhs; }
};

// Throws InvalidArgument for bubble moves.
template <class S>
FiveTermRelation<DecoratedTetrahedron<S>> relationFromTransit(const Triangulation& before,
                                                              const Decoration<S>& D,
                                                              const TransitResult<S>& r);
template <class S>
FiveTermRelation<IdealTetrahedron<S>> relationFromTransit(const std::vector<IdealTetrahedron<S>>& before,
                                                          const IdealTransitResult<S>& r);

// after - before equals exactly the signed relation element of the move
template <class Tet>
bool differsByRelation(const FormalSum<Tet>& before, const FormalSum<Tet>& after,
                       const FiveTermRelation<Tet>& rel, double tol = 1e-12);

struct EquivalenceWitness {
  std::vector<MoveSpec> chain;
};

template <class S>
struct WitnessReplay {
  Triangulation T;
  Decoration<S> D;
  std::vector<MoveRecord> records;
  std::vector<FiveTermRelation<DecoratedTetrahedron<S>>> relations;  // one per 2<->3 step
  std::vector<DSum<S>> classes;                                      // class after each step, [0] = source
};

template <class S>
WitnessReplay<S> replay(const Triangulation& T, const Decoration<S>& D, const EquivalenceWitness& w);

// Replays w from the source and compares with the target up to tetrahedron relabelling.
template <class S>
bool verifyWitness(const Triangulation& source, const Decoration<S>& DS, const Triangulation& target,
                   const Decoration<S>& DT, const EquivalenceWitness& w, double tol = 1e-12);

}  // namespace qhi
