#include "qhi/combinatorics.hpp"

#include <algorithm>
#include <stdexcept>

namespace qhi {

int edgeIndex(int a, int b) {
  if (a > b) std::swap(a, b);
  for (int e = 0; e < 6; ++e)
    if (kEdgeVertex[e][0] == a && kEdgeVertex[e][1] == b) return e;
  throw std::invalid_argument("edgeIndex: not an edge");
}

std::array<int, 3> faceVertices(int v) {
  std::array<int, 3> out{};
  int k = 0;
  for (int u = 0; u < 4; ++u)
    if (u != v) out[k++] = u;
  return out;
}

std::array<int, 2> facesOfEdge(int e) {
  int o = oppositeEdge(e);
  return {kEdgeVertex[o][0], kEdgeVertex[o][1]};
}

int sharedEdge(int f, int g) {
  // the shared edge avoids both f and g, so it is opposite to edge fg
  return oppositeEdge(edgeIndex(f, g));
}

int parity(const Perm4& p) {
  int s = 1;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (p[i] > p[j]) s = -s;
  return s;
}

Perm4 inverse(const Perm4& p) {
  Perm4 q{};
  for (int i = 0; i < 4; ++i) q[p[i]] = i;
  return q;
}

Perm4 compose(const Perm4& a, const Perm4& b) {
  Perm4 c{};
  for (int i = 0; i < 4; ++i) c[i] = a[b[i]];
  return c;
}

Perm4 identityPerm() { return {0, 1, 2, 3}; }

const std::vector<Perm4>& allPerms() {
  static const std::vector<Perm4> perms = [] {
    std::vector<Perm4> v;
    Perm4 p = identityPerm();
    do v.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    return v;
  }();
  return perms;
}

int pairOfPositions(int i, int j) {
  if (i > j) std::swap(i, j);
  if ((i == 0 && j == 1) || (i == 2 && j == 3)) return 0;
  if ((i == 1 && j == 2) || (i == 0 && j == 3)) return 1;
  return 2;
}

}  // namespace qhi
