#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "qhi/combinatorics.hpp"
#include "qhi/scalar.hpp"
#include "qhi/triangulation.hpp"

namespace qhi {

// A linear order on the four vertices of a tetrahedron.
struct Branching {
  Perm4 order{0, 1, 2, 3};  // order[i]: local vertex at branch position i
  Perm4 rank{0, 1, 2, 3};   // rank[v]: branch position of local vertex v

  static Branching fromOrder(const Perm4& order);
  static Branching identity() { return {}; }
  // +1 if local edge e is b-oriented from its lower to its higher local label
  int direction(int e) const;
  bool operator==(const Branching& o) const { return order == o.order; }
};

// lowToHigh[e]: local edge e is oriented from its lower local label to the higher one.
// Throws CoherentFace when some face boundary is a directed cycle.
Branching checkBranching(const std::array<bool, 6>& lowToHigh);

// Upper triangular [[t, x], [0, 1/t]].
template <class S>
struct Borel {
  S t{1};
  S x{0};
};

template <class S>
Borel<S> operator*(const Borel<S>& a, const Borel<S>& b) {
  return {a.t * b.t, a.t * b.x + a.x / b.t};
}
template <class S>
Borel<S> inverse(const Borel<S>& a) {
  return {S(1) / a.t, S(0) - a.x};
}
template <class S>
bool nearlyEqual(const Borel<S>& a, const Borel<S>& b, double tol = 1e-12) {
  return nearlyEqual(a.t, b.t, tol) && nearlyEqual(a.x, b.x, tol);
}
template <class S>
Borel<Complex> toComplex(const Borel<S>& z) {
  return {toComplex(z.t), toComplex(z.x)};
}

// One D-tetrahedron: values are indexed by local edges, cocycle values along the branching.
template <class S>
struct DecoratedTetrahedron {
  int sign = 1;
  Branching b;
  std::array<Borel<S>, 6> z;
  std::array<int, 6> c{};

  // edge between branch positions i < j
  int edgeAt(int i, int j) const { return edgeIndex(b.order[i], b.order[j]); }
  const Borel<S>& zAt(int i, int j) const { return z[edgeAt(i, j)]; }
  int cAt(int i, int j) const { return c[edgeAt(i, j)]; }
};

// Re-order the branching by s (new rank of vertex order[i] is s[i]); sign times parity(s);
// cocycle values inverted on edges whose orientation flips; charges unchanged.
template <class S>
DecoratedTetrahedron<S> s4Act(const Perm4& s, const DecoratedTetrahedron<S>& d);

bool chargeValidOnTet(const std::array<int, 6>& c);
// charges of the pairs {01,23}, {12,03}, {02,13} in branch positions
std::array<int, 3> chargePairs(const Branching& b, const std::array<int, 6>& c);

template <class S>
struct Decoration {
  std::vector<Branching> b;           // per tetrahedron
  std::vector<int> sign;              // per tetrahedron
  std::vector<Borel<S>> z;            // per edge class, along its b-orientation
  std::vector<std::array<int, 6>> c;  // per tetrahedron and local edge
};

template <class S>
DecoratedTetrahedron<S> tetrahedron(const Triangulation& T, const Decoration<S>& D, int t);

Decoration<Complex> toComplex(const Decoration<GaussianRational>& D);
Decoration<Complex> toComplex(const Decoration<Complex>& D);

// sign * parity of the branching order relative to the manifold orientation
int orientationSign(const Triangulation& T, int t, const Branching& b);
std::vector<int> orientationSigns(const Triangulation& T, const std::vector<Branching>& b);

// Per edge class: +1/-1 if every preimage's b-orientation agrees with (is opposite to) the
// class reference orientation, 0 if the preimages disagree.
std::vector<int> edgeBDirections(const Triangulation& T, const std::vector<Branching>& b);

// Cocycle condition on every face of every tetrahedron.
template <class S>
bool cocycleCheck(const Triangulation& T, const std::vector<Branching>& b, const std::vector<Borel<S>>& z,
                  double tol = 1e-12);

struct ChargeReport {
  std::vector<int> badTets;          // per-tet constraints violated
  std::vector<int> badEdges;         // edge classes violating the 2/0 sum rule
  std::vector<int> edgeSums;         // per edge class
  bool classVanishes = true;         // [c] = 0
  std::vector<int> oddCycles;        // indices of dual cycles with odd charge parity
  bool ok() const { return badTets.empty() && badEdges.empty() && classVanishes; }
};
ChargeReport chargeCheck(const Triangulation& T, const std::vector<std::array<int, 6>>& c);
// parity of [c] on each fundamental dual cycle
std::vector<int> chargeClass(const Triangulation& T, const std::vector<std::array<int, 6>>& c);
std::vector<int> chargeClass(const std::vector<std::vector<DualStep>>& cycles,
                             const std::vector<std::array<int, 6>>& c);

struct ValidationReport {
  // conditions (1)-(7) of a D-triangulation, index 0 unused
  std::array<bool, 8> item{true, true, true, true, true, true, true, true};
  bool fullable = true;
  bool full = true;
  bool hamiltonian = true;
  std::vector<std::string> messages;
  bool ok() const;
};

template <class S>
ValidationReport validateDTriangulation(const Triangulation& T, const Decoration<S>& D);

// All integral charges as a particular solution plus kernel lattice. Unknowns are the
// charges of the local edge pairs {01,23}, {02,13}, {03,12}, three per tetrahedron.
// Throws NoValidCharge.
struct ChargeLattice {
  std::vector<long long> particular;
  std::vector<std::vector<long long>> kernel;
};
ChargeLattice chargeLattice(const Triangulation& T);
std::vector<std::array<int, 6>> chargesFromPairs(const std::vector<long long>& pairs);
std::vector<long long> pairsFromCharges(const std::vector<std::array<int, 6>>& c);
// A valid charge with [c] = 0 of least max-norm found by the lattice search.
std::vector<std::array<int, 6>> findCharge(const Triangulation& T);
// Shift a lattice point by kernel vectors so that [c] vanishes; nullopt if impossible.
std::optional<std::vector<long long>> fixChargeClass(const Triangulation& T, std::vector<long long> pairs,
                                                     const std::vector<std::vector<long long>>& kernel);

// z on edge classes from a vertex 0-cochain u (one Borel value per vertex class):
// z([v_i, v_j]) = u(v_i)^{-1} u(v_j) along the b-orientation.
template <class S>
std::vector<Borel<S>> coboundary(const Triangulation& T, const std::vector<Branching>& b,
                                 const std::vector<Borel<S>>& u);

}  // namespace qhi
