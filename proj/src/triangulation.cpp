#include "qhi/triangulation.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <set>

#include "qhi/errors.hpp"

namespace qhi {

namespace {

struct ParityUnionFind {
  std::vector<int> parent, rel;  // rel: parity relative to parent (0 same, 1 reversed)
  explicit ParityUnionFind(int n) : parent(n), rel(n, 0) { std::iota(parent.begin(), parent.end(), 0); }
  std::pair<int, int> find(int x) {
    int p = 0;
    int r = x;
    while (parent[r] != r) {
      p ^= rel[r];
      r = parent[r];
    }
    // path compression
    int cur = x, acc = p;
    while (parent[cur] != cur) {
      int next = parent[cur];
      int nrel = acc ^ rel[cur];
      parent[cur] = r;
      rel[cur] = acc;
      acc = nrel;
      cur = next;
    }
    return {r, p};
  }
  // returns false on parity conflict
  bool unite(int a, int b, int parity) {
    auto [ra, pa] = find(a);
    auto [rb, pb] = find(b);
    if (ra == rb) return (pa ^ pb) == parity;
    if (ra < rb) std::swap(ra, rb), std::swap(pa, pb);
    parent[ra] = rb;
    rel[ra] = pa ^ pb ^ parity;
    return true;
  }
};

}  // namespace

Triangulation Triangulation::build(int k, const std::vector<FacePairing>& pairings,
                                   const std::vector<int>& hamiltonian, int orientation0) {
  if (k < 1) fail(ErrorKind::InvalidArgument, "a triangulation needs at least one tetrahedron");
  Triangulation T;
  T.n_ = k;
  T.orientation0_ = orientation0 >= 0 ? 1 : -1;
  T.glue_.assign(k, {});
  for (const auto& p : pairings) {
    for (int x : {p.srcTet, p.dstTet})
      if (x < 0 || x >= k) fail(ErrorKind::InconsistentVertexMap, "tetrahedron id out of range");
    for (int f : {p.srcFace, p.dstFace})
      if (f < 0 || f > 3) fail(ErrorKind::InconsistentVertexMap, "face index out of range");
    if (p.srcTet == p.dstTet && p.srcFace == p.dstFace)
      fail(ErrorKind::SelfPairedFace, "face " + std::to_string(p.srcFace) + " of tet " +
                                          std::to_string(p.srcTet) + " paired to itself");
    Perm4 perm{};
    perm[p.srcFace] = p.dstFace;
    auto fv = faceVertices(p.srcFace);
    std::set<int> seen;
    for (int i = 0; i < 3; ++i) {
      int img = p.map[i];
      if (img < 0 || img > 3 || img == p.dstFace || !seen.insert(img).second)
        fail(ErrorKind::InconsistentVertexMap, "vertex map is not a bijection onto the target face");
      perm[fv[i]] = img;
    }
    for (auto [t, f] : {std::pair{p.srcTet, p.srcFace}, std::pair{p.dstTet, p.dstFace}})
      if (T.glue_[t][f].tet >= 0)
        fail(ErrorKind::InconsistentVertexMap, "slot (" + std::to_string(t) + "," + std::to_string(f) + ") paired twice");
    T.glue_[p.srcTet][p.srcFace] = {p.dstTet, p.dstFace, perm};
    T.glue_[p.dstTet][p.dstFace] = {p.srcTet, p.srcFace, inverse(perm)};
  }
  for (int t = 0; t < k; ++t)
    for (int f = 0; f < 4; ++f)
      if (T.glue_[t][f].tet < 0)
        fail(ErrorKind::UnpairedFace, "face " + std::to_string(f) + " of tet " + std::to_string(t) + " is unpaired");
  T.computeQuotient();
  T.ham_.assign(T.numEdges(), false);
  for (int s : hamiltonian) {
    if (s < 0 || s >= T.numEdges()) fail(ErrorKind::InvalidArgument, "hamiltonian edge id out of range");
    T.ham_[s] = true;
  }
  return T;
}

void Triangulation::computeQuotient() {
  const int k = n_;
  ParityUnionFind eu(6 * k);
  ParityUnionFind vu(4 * k);
  for (int t = 0; t < k; ++t)
    for (int f = 0; f < 4; ++f) {
      const Gluing& g = glue_[t][f];
      for (int v : faceVertices(f)) vu.unite(4 * t + v, 4 * g.tet + g.perm[v], 0);
      for (int e = 0; e < 6; ++e) {
        int a = kEdgeVertex[e][0], b = kEdgeVertex[e][1];
        if (a == f || b == f) continue;
        int ia = g.perm[a], ib = g.perm[b];
        int e2 = edgeIndex(ia, ib);
        if (!eu.unite(6 * t + e, 6 * g.tet + e2, ia < ib ? 0 : 1))
          fail(ErrorKind::InconsistentVertexMap, "an edge is identified with its own reverse");
      }
    }

  // class ids by smallest representative; union-find roots are already minimal because
  // unite always hangs the larger root below the smaller one
  auto relabel = [](int total, auto rootOf) {
    std::map<int, int> id;
    std::vector<int> out(total);
    for (int i = 0; i < total; ++i) {
      int r = rootOf(i);
      auto it = id.find(r);
      if (it == id.end()) it = id.emplace(r, static_cast<int>(id.size())).first;
      out[i] = it->second;
    }
    return out;
  };
  auto eid = relabel(6 * k, [&](int i) { return eu.find(i).first; });
  auto vid = relabel(4 * k, [&](int i) { return vu.find(i).first; });

  edgeClass_.assign(k, {});
  edgeSense_.assign(k, {});
  vertexClass_.assign(k, {});
  faceClass_.assign(k, {});
  int ne = eid.empty() ? 0 : *std::max_element(eid.begin(), eid.end()) + 1;
  int nv = vid.empty() ? 0 : *std::max_element(vid.begin(), vid.end()) + 1;
  edgePre_.assign(ne, {});
  vertexPre_.assign(nv, {});
  for (int t = 0; t < k; ++t) {
    for (int e = 0; e < 6; ++e) {
      edgeClass_[t][e] = eid[6 * t + e];
      edgeSense_[t][e] = eu.find(6 * t + e).second ? -1 : 1;
      edgePre_[eid[6 * t + e]].push_back({t, e});
    }
    for (int v = 0; v < 4; ++v) {
      vertexClass_[t][v] = vid[4 * t + v];
      vertexPre_[vid[4 * t + v]].push_back({t, v});
    }
  }
  edgeEnds_.assign(ne, {});
  for (int s = 0; s < ne; ++s) {
    auto [t, e] = edgePre_[s].front();
    int a = kEdgeVertex[e][0], b = kEdgeVertex[e][1];
    if (edgeSense_[t][e] < 0) std::swap(a, b);
    edgeEnds_[s] = {vertexClass_[t][a], vertexClass_[t][b]};
  }
  facePre_.clear();
  for (int t = 0; t < k; ++t)
    for (int f = 0; f < 4; ++f) {
      const Gluing& g = glue_[t][f];
      if (std::pair{t, f} <= std::pair{g.tet, g.face}) {
        faceClass_[t][f] = faceClass_[g.tet][g.face] = static_cast<int>(facePre_.size());
        facePre_.push_back({{t, f}, {g.tet, g.face}});
      }
    }

  orient_.assign(k, 0);
  for (int root = 0; root < k; ++root) {
    if (orient_[root]) continue;
    orient_[root] = root == 0 ? orientation0_ : 1;
    std::queue<int> q;
    q.push(root);
    while (!q.empty()) {
      int t = q.front();
      q.pop();
      for (int f = 0; f < 4; ++f) {
        const Gluing& g = glue_[t][f];
        int want = -orient_[t] * parity(g.perm);
        if (!orient_[g.tet]) {
          orient_[g.tet] = want;
          q.push(g.tet);
        } else if (orient_[g.tet] != want) {
          fail(ErrorKind::NonOrientable, "face gluings admit no consistent orientation");
        }
      }
    }
  }
}

std::vector<FacePairing> Triangulation::pairings() const {
  std::vector<FacePairing> out;
  for (int t = 0; t < n_; ++t)
    for (int f = 0; f < 4; ++f) {
      const Gluing& g = glue_[t][f];
      if (std::pair{t, f} < std::pair{g.tet, g.face}) {
        FacePairing p;
        p.srcTet = t;
        p.srcFace = f;
        p.dstTet = g.tet;
        p.dstFace = g.face;
        auto fv = faceVertices(f);
        for (int i = 0; i < 3; ++i) p.map[i] = g.perm[fv[i]];
        out.push_back(p);
      }
    }
  return out;
}

std::vector<int> Triangulation::hamiltonianIds() const {
  std::vector<int> ids;
  for (int s = 0; s < numEdges(); ++s)
    if (ham_[s]) ids.push_back(s);
  return ids;
}

Triangulation Triangulation::withHamiltonian(const std::vector<int>& ids) const {
  Triangulation T = *this;
  T.ham_.assign(numEdges(), false);
  for (int s : ids) {
    if (s < 0 || s >= numEdges()) fail(ErrorKind::InvalidArgument, "hamiltonian edge id out of range");
    T.ham_[s] = true;
  }
  return T;
}

Triangulation Triangulation::withOrientation(int o) const {
  o = o >= 0 ? 1 : -1;
  Triangulation T = *this;
  if (o != orientation0_)
    for (int& x : T.orient_) x = -x;
  T.orientation0_ = o;
  return T;
}

bool Triangulation::isFullable() const {
  for (int s = 0; s < numEdges(); ++s)
    if (edgeEnds_[s][0] == edgeEnds_[s][1]) return false;
  return true;
}

std::vector<std::vector<DualStep>> Triangulation::dualCycles() const {
  struct Crossing {
    int fromTet, fromFace, toTet, toFace;
  };
  // BFS spanning tree of the dual graph
  std::vector<int> parentSlotFace(n_, -1);  // face of t through which it was reached
  std::vector<std::vector<Crossing>> path(n_);
  std::vector<bool> seen(n_, false);
  std::vector<std::array<bool, 4>> treeSlot(n_, {false, false, false, false});
  std::vector<std::vector<std::vector<DualStep>>> dummy;
  std::vector<std::vector<DualStep>> cycles;
  for (int root = 0; root < n_; ++root) {
    if (seen[root]) continue;
    seen[root] = true;
    std::queue<int> q;
    q.push(root);
    while (!q.empty()) {
      int t = q.front();
      q.pop();
      for (int f = 0; f < 4; ++f) {
        const Gluing& g = glue_[t][f];
        if (seen[g.tet]) continue;
        seen[g.tet] = true;
        treeSlot[t][f] = treeSlot[g.tet][g.face] = true;
        path[g.tet] = path[t];
        path[g.tet].push_back({t, f, g.tet, g.face});
        q.push(g.tet);
      }
    }
  }
  for (int t = 0; t < n_; ++t)
    for (int f = 0; f < 4; ++f) {
      const Gluing& g = glue_[t][f];
      if (treeSlot[t][f] || std::pair{t, f} > std::pair{g.tet, g.face}) continue;
      const auto& pa = path[t];
      const auto& pb = path[g.tet];
      size_t common = 0;
      while (common < pa.size() && common < pb.size() && pa[common].toTet == pb[common].toTet &&
             pa[common].toFace == pb[common].toFace)
        ++common;
      std::vector<Crossing> cyc(pa.begin() + common, pa.end());
      cyc.push_back({t, f, g.tet, g.face});
      for (size_t i = pb.size(); i-- > common;)
        cyc.push_back({pb[i].toTet, pb[i].toFace, pb[i].fromTet, pb[i].fromFace});
      std::vector<DualStep> steps;
      for (size_t i = 0; i < cyc.size(); ++i) {
        const Crossing& cur = cyc[i];
        const Crossing& next = cyc[(i + 1) % cyc.size()];
        steps.push_back({cur.toTet, cur.toFace, next.fromFace});
      }
      cycles.push_back(std::move(steps));
    }
  return cycles;
}

HamiltonianReport validateHamiltonian(const Triangulation& T, const std::vector<int>& H) {
  HamiltonianReport rep;
  const int nv = T.numVertices();
  std::vector<int> degree(nv, 0);
  std::vector<int> parent(nv);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::set<int> uniq;
  for (int s : H) {
    if (s < 0 || s >= T.numEdges()) {
      rep.problems.push_back("edge id " + std::to_string(s) + " out of range");
      continue;
    }
    if (!uniq.insert(s).second) {
      rep.problems.push_back("edge " + std::to_string(s) + " listed twice");
      continue;
    }
    auto ends = T.edgeEnds(s);
    degree[ends[0]]++;
    degree[ends[1]]++;
    parent[find(ends[0])] = find(ends[1]);
  }
  for (int v = 0; v < nv; ++v)
    if (degree[v] != 2)
      rep.problems.push_back("vertex " + std::to_string(v) + " has H-degree " + std::to_string(degree[v]));
  std::set<int> roots;
  for (int v = 0; v < nv; ++v) roots.insert(find(v));
  rep.components = static_cast<int>(roots.size());
  rep.valid = rep.problems.empty();
  return rep;
}

std::optional<Isomorphism> findIsomorphism(const Triangulation& a, const Triangulation& b,
                                           const std::function<bool(int, int, const Perm4&)>& allowed) {
  if (a.size() != b.size()) return std::nullopt;
  const int n = a.size();
  Isomorphism iso;
  iso.tetMap.assign(n, -1);
  iso.vertexMap.assign(n, identityPerm());
  std::vector<bool> used(n, false);
  // components of a are matched one at a time
  for (int root = 0; root < n; ++root) {
    if (iso.tetMap[root] >= 0) continue;
    bool matched = false;
    for (int cand = 0; cand < n && !matched; ++cand) {
      if (used[cand]) continue;
      for (const Perm4& p0 : allPerms()) {
        if (allowed && !allowed(root, cand, p0)) continue;
        auto tm = iso.tetMap;
        auto vm = iso.vertexMap;
        auto us = used;
        tm[root] = cand;
        vm[root] = p0;
        us[cand] = true;
        std::queue<int> q;
        q.push(root);
        bool ok = true;
        while (!q.empty() && ok) {
          int t = q.front();
          q.pop();
          for (int f = 0; f < 4 && ok; ++f) {
            const Gluing& ga = a.gluing(t, f);
            int bt = tm[t];
            int bf = vm[t][f];
            const Gluing& gb = b.gluing(bt, bf);
            // required map on the partner: vm[ga.tet] = gb.perm o vm[t] o ga.perm^{-1}
            Perm4 want = compose(gb.perm, compose(vm[t], inverse(ga.perm)));
            if (tm[ga.tet] < 0) {
              if (us[gb.tet] || (allowed && !allowed(ga.tet, gb.tet, want))) { ok = false; break; }
              tm[ga.tet] = gb.tet;
              vm[ga.tet] = want;
              us[gb.tet] = true;
              q.push(ga.tet);
            } else if (tm[ga.tet] != gb.tet || vm[ga.tet] != want) {
              ok = false;
            }
          }
        }
        if (ok) {
          iso.tetMap = tm;
          iso.vertexMap = vm;
          used = us;
          matched = true;
          break;
        }
      }
    }
    if (!matched) return std::nullopt;
  }
  return iso;
}

Triangulation relabelTetrahedra(const Triangulation& T, const std::vector<int>& perm) {
  std::vector<FacePairing> ps = T.pairings();
  for (auto& p : ps) {
    p.srcTet = perm[p.srcTet];
    p.dstTet = perm[p.dstTet];
  }
  Triangulation R = Triangulation::build(T.size(), ps, {}, 1);
  // keep the manifold orientation: tet perm[0] must have the orientation tet 0 had
  if (R.orientation(perm[0]) != T.orientation(0)) R = R.withOrientation(-R.orientation0());
  // hamiltonian: map classes through a preimage
  std::vector<int> ham;
  for (int s : T.hamiltonianIds()) {
    auto [t, e] = T.edgePreimages(s).front();
    ham.push_back(R.edgeClass(perm[t], e));
  }
  return R.withHamiltonian(ham);
}

}  // namespace qhi
