#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qhi/combinatorics.hpp"

namespace qhi {

struct FacePairing {
  int srcTet = 0, srcFace = 0;
  int dstTet = 0, dstFace = 0;
  // images of the source face vertices (increasing order) on the target tetrahedron
  std::array<int, 3> map{};
};

struct Gluing {
  int tet = -1;
  int face = -1;
  Perm4 perm{};  // local vertex of this tet -> local vertex of the partner
};

// One step of a closed normal path: enter `tet` through face `in`, leave through `out`.
struct DualStep {
  int tet, in, out;
};

class Triangulation {
 public:
  Triangulation() = default;

  // Throws UnpairedFace, InconsistentVertexMap, SelfPairedFace, NonOrientable.
  static Triangulation build(int tetrahedra, const std::vector<FacePairing>& pairings,
                             const std::vector<int>& hamiltonian = {}, int orientation0 = 1);

  int size() const { return n_; }
  const Gluing& gluing(int t, int f) const { return glue_[t][f]; }
  std::vector<FacePairing> pairings() const;

  int numEdges() const { return static_cast<int>(edgePre_.size()); }
  int numVertices() const { return static_cast<int>(vertexPre_.size()); }
  int numFaces() const { return static_cast<int>(facePre_.size()); }
  int eulerCharacteristic() const { return numVertices() - numEdges() + numFaces() - n_; }

  int edgeClass(int t, int e) const { return edgeClass_[t][e]; }
  // +1 if local edge e (low->high local vertex) runs along the class reference orientation
  int edgeSense(int t, int e) const { return edgeSense_[t][e]; }
  int vertexClass(int t, int v) const { return vertexClass_[t][v]; }
  int faceClass(int t, int f) const { return faceClass_[t][f]; }
  const std::vector<std::pair<int, int>>& edgePreimages(int s) const { return edgePre_[s]; }
  const std::vector<std::pair<int, int>>& vertexPreimages(int w) const { return vertexPre_[w]; }
  const std::vector<std::pair<int, int>>& facePreimages(int f) const { return facePre_[f]; }
  // vertex classes at the tail and head of the reference orientation
  std::array<int, 2> edgeEnds(int s) const { return edgeEnds_[s]; }

  // orientation of tet t's local vertex order relative to the manifold orientation
  int orientation(int t) const { return orient_[t]; }
  int orientation0() const { return orientation0_; }

  const std::vector<bool>& hamiltonian() const { return ham_; }
  bool inHamiltonian(int s) const { return ham_[s]; }
  std::vector<int> hamiltonianIds() const;
  Triangulation withHamiltonian(const std::vector<int>& ids) const;
  Triangulation withOrientation(int orientation0) const;

  bool isFullable() const;
  std::vector<std::vector<DualStep>> dualCycles() const;

 private:
  void computeQuotient();

  int n_ = 0;
  int orientation0_ = 1;
  std::vector<std::array<Gluing, 4>> glue_;
  std::vector<std::array<int, 6>> edgeClass_, edgeSense_;
  std::vector<std::array<int, 4>> vertexClass_, faceClass_;
  std::vector<std::vector<std::pair<int, int>>> edgePre_, vertexPre_, facePre_;
  std::vector<std::array<int, 2>> edgeEnds_;
  std::vector<int> orient_;
  std::vector<bool> ham_;
};

struct HamiltonianReport {
  bool valid = false;
  int components = 0;
  std::vector<std::string> problems;
};

HamiltonianReport validateHamiltonian(const Triangulation& T, const std::vector<int>& H);

// Tet map a -> b with per-tet local vertex maps, or nullopt.
struct Isomorphism {
  std::vector<int> tetMap;
  std::vector<Perm4> vertexMap;
};
// `allowed(tetA, tetB, vertexMap)` may restrict the local maps (e.g. to branching-preserving ones).
std::optional<Isomorphism> findIsomorphism(const Triangulation& a, const Triangulation& b,
                                           const std::function<bool(int, int, const Perm4&)>& allowed = {});

// Relabel tetrahedra: new id of old tet t is perm[t].
Triangulation relabelTetrahedra(const Triangulation& T, const std::vector<int>& perm);

}  // namespace qhi
