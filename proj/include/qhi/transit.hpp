#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "qhi/decoration.hpp"
#include "qhi/ideal.hpp"

namespace qhi {

enum class MoveKind { TwoThree, ThreeTwo, Bubble, Unbubble };

const char* moveName(MoveKind k);

// A branched 2<->3 move puts its five vertices in a total order. Entry (low, high) names the
// positions of the endpoints of the edge created by 2->3 (removed by 3->2), osign the sign
// convention of the move.
struct CatalogEntry {
  int low, high;
  int osign;
  bool admissible;
};
const std::vector<CatalogEntry>& transitCatalog();
bool isAdmissible(int posA, int posB);

struct MoveRecord {
  MoveKind kind = MoveKind::TwoThree;
  int posLow = -1, posHigh = -1;
  int osign = 0;
  bool admissible = false;
  bool adjacentApices = false;
  std::vector<int> oldTets, newTets;            // ids in the old / new triangulation
  std::vector<std::array<int, 5>> oldLocal;     // position -> local vertex (or -1)
  std::vector<std::array<int, 5>> newLocal;
  std::vector<int> tetMap;                      // old tet -> new tet, -1 if removed
  std::vector<int> edgeMap;                     // old edge class -> new class, -1 if removed
  std::vector<int> vertexMap;                   // old vertex class -> new class, -1 if removed
  int edge = -1;    // 2-3: new edge class; 3-2: removed old edge class
  int vertex = -1;  // bubble: new vertex class; unbubble: removed old vertex class
  // charges at the move edge on the three-tetrahedron side and the other two pair charges
  std::array<int, 3> theta{}, alpha{}, beta{};
};

template <class S>
struct TransitResult {
  Triangulation T;
  Decoration<S> D;
  MoveRecord move;
};

// 2->3 across face `face` of tetrahedron `tet`. Throws NotAdjacent, NonBrancheable,
// FullnessLost, NoValidCharge.
template <class S>
TransitResult<S> transit23(const Triangulation& T, const Decoration<S>& D, int tet, int face);

// 3->2 removing edge class `edge`. Throws BadValence, HamiltonianEdge, NonBrancheable, NoValidCharge.
template <class S>
TransitResult<S> transit32(const Triangulation& T, const Decoration<S>& D, int edge);

// Insert a two-tetrahedron pillow along face (tet, face). The first edge of the face lying in
// H is rerouted through the new vertex, which is last in both new branchings. The cocycle
// value on the edge from the lowest face vertex to the new vertex is `g`, or the first full
// choice from a fixed list. Throws InvalidSite, FullnessLost, NoValidCharge.
template <class S>
TransitResult<S> transitBubble(const Triangulation& T, const Decoration<S>& D, int tet, int face,
                               std::optional<Borel<S>> g = std::nullopt);

// Remove the pillow around a vertex of valence two. Throws InvalidSite, NoValidCharge.
template <class S>
TransitResult<S> transitUnbubble(const Triangulation& T, const Decoration<S>& D, int vertex);

template <class S>
struct IdealTransitResult {
  Triangulation T;
  std::vector<IdealTetrahedron<S>> tets;
  MoveRecord move;
};

// 2->3 on ideal tetrahedra: the five ideal vertices are developed in CP^1 from the two old
// moduli and the three new moduli are cross-ratios. Throws DegenerateModuli.
template <class S>
IdealTransitResult<S> transitIdeal23(const Triangulation& T, const std::vector<IdealTetrahedron<S>>& tets, int tet,
                                     int face);

// Flattening of the new tetrahedra preserving the signed log-parameter sum on the nine
// surviving edges of the move. Throws NoSolution.
std::vector<std::array<long long, 2>> transitFlattening23(const std::vector<IdealTetrahedron<Complex>>& oldTets,
                                                          const std::vector<std::array<long long, 2>>& oldPq,
                                                          const IdealTransitResult<Complex>& result);

struct MoveSpec {
  MoveKind kind = MoveKind::TwoThree;
  int tet = -1, face = -1;  // 2-3 and bubble
  int edge = -1;            // 3-2
  int vertex = -1;          // unbubble
};

template <class S>
TransitResult<S> applyMove(const Triangulation& T, const Decoration<S>& D, const MoveSpec& m);

// Every 2-3 site (tet, face) with tet < partner whose move is admissible and succeeds.
template <class S>
std::vector<MoveSpec> admissibleSites23(const Triangulation& T, const Decoration<S>& D);

// Decorated triangulations equal up to relabelling tetrahedra (branchings must correspond).
template <class S>
bool sameDecorated(const Triangulation& A, const Decoration<S>& DA, const Triangulation& B, const Decoration<S>& DB,
                   double tol = 1e-12);

}  // namespace qhi
