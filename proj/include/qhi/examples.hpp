#pragma once

#include <random>
#include <string>
#include <vector>

#include "qhi/io.hpp"

namespace qhi {

// Closed triangulation whose tetrahedra are given by vertex labels; faces with equal label
// sets are glued. Every face label set must occur exactly twice.
Triangulation fromLabelledTetrahedra(const std::vector<std::array<int, 4>>& labels);
// Edge class joining labels a and b (first match).
int edgeWithLabels(const Triangulation& T, const std::vector<std::array<int, 4>>& labels, int a, int b);

// Two tetrahedra glued by the identity on every face (S^3, 4 vertices). H is the 4-cycle 0-1-2-3.
Triangulation doubleTetrahedron();
// The five facets of the 4-simplex (S^3, 5 vertices). H is the 5-cycle 0-1-2-3-4.
Triangulation boundaryOf4Simplex();
// L(p, q) from a join of two circles of length m*p, quotiented by the Z/p action; m*m*p
// tetrahedra, 2m vertices, H the two core circles.
Triangulation lensSpace(int p, int q, int m = 2);
// Two tetrahedra with one vertex and two edges, the figure-eight complement gluing.
Triangulation figureEightPattern();
// One tetrahedron with its faces paired among themselves (S^3, 2 vertices, 3 edges).
Triangulation oneTetrahedron();

// Branchings induced by a total order on vertex classes (rank per class).
std::vector<Branching> branchingFromVertexRanks(const Triangulation& T, const std::vector<int>& rank);

// Coboundary decoration: z = du for the given vertex values, orientation signs and a
// least-norm valid charge.
template <class S>
Decoration<S> coboundaryDecoration(const Triangulation& T, const std::vector<Branching>& b,
                                   const std::vector<Borel<S>>& u);

Borel<Complex> randomBorel(std::mt19937_64& rng);
// small Gaussian rationals, never zero in t
Borel<GaussianRational> randomExactBorel(std::mt19937_64& rng);

Decoration<Complex> randomDecoration(const Triangulation& T, const std::vector<Branching>& b, std::mt19937_64& rng);
Decoration<GaussianRational> randomExactDecoration(const Triangulation& T, const std::vector<Branching>& b,
                                                   std::mt19937_64& rng);

// Lens space decoration whose holonomy around the core sends the generator to
// [[e^{2 pi i r/p}, x], [0, e^{-2 pi i r/p}]]; the vertex values are random. Branchings run
// around each core circle, so they do not come from an order on vertex classes: this is what
// makes admissible 2-3 sites exist.
Decoration<Complex> lensDecoration(int p, int q, int r, Complex x, std::mt19937_64& rng, int m = 2);

// Two regular ideal tetrahedra of positive sign.
std::vector<IdealTetrahedron<Complex>> figureEightIdeal(const Triangulation& T);

// Greedy witness: for each requested kind the first site that succeeds and leaves a valid
// D-triangulation is used. 2-3 and 3-2 steps must be admissible. Throws InvalidSite when some
// step has no site.
template <class S>
EquivalenceWitness buildWitness(const Triangulation& T, const Decoration<S>& D, const std::vector<MoveKind>& kinds);

// The bundled data set by name; `names()` lists them.
std::vector<std::string> exampleNames();
Document example(const std::string& name);

}  // namespace qhi
