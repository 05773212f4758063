#pragma once

#include <array>
#include <vector>

namespace qhi {

using Perm4 = std::array<int, 4>;

// Local edges of a tetrahedron, ordered 01,02,03,12,13,23. Opposite edge of e is 5-e.
inline constexpr int kEdgeVertex[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};

int edgeIndex(int a, int b);
inline int oppositeEdge(int e) { return 5 - e; }
// local edge pair: 0 for {01,23}, 1 for {02,13}, 2 for {03,12}
inline int pairOfLocalEdge(int e) { return e < 5 - e ? e : 5 - e; }

// the three vertices of the face opposite v, increasing
std::array<int, 3> faceVertices(int v);
// the two faces containing edge e (the faces opposite the two vertices off e)
std::array<int, 2> facesOfEdge(int e);
// edge shared by faces f and g (f != g)
int sharedEdge(int f, int g);

int parity(const Perm4& p);
Perm4 inverse(const Perm4& p);
// (a*b)[i] = a[b[i]]
Perm4 compose(const Perm4& a, const Perm4& b);
Perm4 identityPerm();
const std::vector<Perm4>& allPerms();

// Pair index of an edge given by branch positions: 0 for {01,23}, 1 for {12,03}, 2 for {02,13}.
int pairOfPositions(int i, int j);

}  // namespace qhi
