#include "qhi/transit.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "qhi/errors.hpp"
#include "qhi/intlinalg.hpp"

namespace qhi {

const char* moveName(MoveKind k) {
  switch (k) {
    case MoveKind::TwoThree: return "2-3";
    case MoveKind::ThreeTwo: return "3-2";
    case MoveKind::Bubble: return "bubble";
    case MoveKind::Unbubble: return "unbubble";
  }
  return "?";
}

bool isAdmissible(int a, int b) {
  int d = std::abs(a - b);
  return d == 2 || d == 3;
}

const std::vector<CatalogEntry>& transitCatalog() {
  static const std::vector<CatalogEntry> cat = [] {
    std::vector<CatalogEntry> v;
    for (int lo = 0; lo < 5; ++lo)
      for (int hi = lo + 1; hi < 5; ++hi)
        for (int s : {1, -1}) v.push_back({lo, hi, s, isAdmissible(lo, hi)});
    return v;
  }();
  return cat;
}

namespace {

int alt(int k) { return (k % 2) ? -1 : 1; }

using Local5 = std::array<int, 5>;

// A 2<->3 move seen through the total order of its five vertices.
struct Config {
  std::vector<int> oldTets;
  std::vector<Local5> oldLocal;  // position -> local vertex, -1 if absent
  std::vector<int> newMissing;   // new tet j spans every position but newMissing[j]
  int posD = -1, posE = -1;      // endpoints of the edge created (2-3) or removed (3-2)
  bool adjacent = false;
};

Local5 localOfMissing(int m) {
  Local5 l{};
  int k = 0;
  for (int p = 0; p < 5; ++p) l[p] = p == m ? -1 : k++;
  return l;
}

bool spans(const Local5& l, const std::array<int, 3>& tri) {
  return l[tri[0]] >= 0 && l[tri[1]] >= 0 && l[tri[2]] >= 0;
}

int outside(const Local5& l, const std::array<int, 3>& tri) {
  for (int p = 0; p < 5; ++p)
    if (l[p] >= 0 && p != tri[0] && p != tri[1] && p != tri[2]) return p;
  return -1;
}

FacePairing pairingFromPerm(int srcTet, int srcFace, int dstTet, const Perm4& perm) {
  FacePairing p;
  p.srcTet = srcTet;
  p.srcFace = srcFace;
  p.dstTet = dstTet;
  p.dstFace = perm[srcFace];
  auto fv = faceVertices(srcFace);
  for (int i = 0; i < 3; ++i) p.map[i] = perm[fv[i]];
  return p;
}

// compaction of tet ids after deleting `dropped` (sorted)
int shifted(const std::vector<int>& dropped, int id) {
  int s = 0;
  for (int d : dropped)
    if (d < id) ++s;
  return id - s;
}

struct Rebuilt {
  Triangulation T;
  std::vector<int> tetMap, newIds;
  std::vector<Local5> newLocal;
  std::vector<int> edgeMap, vertexMap;
  int special = -1;  // class of the D-E edge after the move, if present
};

Rebuilt rebuild(const Triangulation& T, const Config& cfg) {
  const int k = T.size();
  const int nOld = static_cast<int>(cfg.oldTets.size());
  const int nNew = static_cast<int>(cfg.newMissing.size());
  std::vector<char> removed(k, 0);
  std::map<int, int> oldIndex;
  for (int i = 0; i < nOld; ++i) {
    removed[cfg.oldTets[i]] = 1;
    oldIndex[cfg.oldTets[i]] = i;
  }
  std::vector<int> freed = cfg.oldTets;
  std::sort(freed.begin(), freed.end());
  std::vector<int> dropped;
  if (nNew < nOld) dropped.assign(freed.begin() + nNew, freed.end());

  Rebuilt r;
  r.tetMap.assign(k, -1);
  for (int t = 0; t < k; ++t)
    if (!removed[t]) r.tetMap[t] = shifted(dropped, t);
  for (int j = 0; j < nNew; ++j) {
    r.newIds.push_back(j < nOld ? shifted(dropped, freed[j]) : k + (j - nOld));
    r.newLocal.push_back(localOfMissing(cfg.newMissing[j]));
  }
  const int total = k + nNew - nOld;

  std::vector<FacePairing> ps;
  for (int t = 0; t < k; ++t) {
    if (removed[t]) continue;
    for (int f = 0; f < 4; ++f) {
      const Gluing& g = T.gluing(t, f);
      if (removed[g.tet] || std::make_pair(g.tet, g.face) < std::make_pair(t, f)) continue;
      ps.push_back(pairingFromPerm(r.tetMap[t], f, r.tetMap[g.tet], g.perm));
    }
  }

  struct External {
    int oldTet, oldFace, newTet, newFace;
    Perm4 phi;  // new local -> old local
  };
  std::vector<External> ext;
  for (int a = 0; a < 5; ++a)
    for (int b = a + 1; b < 5; ++b)
      for (int c = b + 1; c < 5; ++c) {
        std::array<int, 3> tri{a, b, c};
        std::vector<int> inNew, inOld;
        for (int j = 0; j < nNew; ++j)
          if (spans(r.newLocal[j], tri)) inNew.push_back(j);
        for (int i = 0; i < nOld; ++i)
          if (spans(cfg.oldLocal[i], tri)) inOld.push_back(i);
        if (inNew.size() == 2) {
          const Local5& l1 = r.newLocal[inNew[0]];
          const Local5& l2 = r.newLocal[inNew[1]];
          int m1 = outside(l1, tri), m2 = outside(l2, tri);
          Perm4 p{};
          for (int q : tri) p[l1[q]] = l2[q];
          p[l1[m1]] = l2[m2];
          ps.push_back(pairingFromPerm(r.newIds[inNew[0]], l1[m1], r.newIds[inNew[1]], p));
        } else if (inNew.size() == 1) {
          if (inOld.size() != 1) fail(ErrorKind::InvalidSite, "move configuration is inconsistent");
          const Local5& ln = r.newLocal[inNew[0]];
          const Local5& lo = cfg.oldLocal[inOld[0]];
          int mn = outside(ln, tri), mo = outside(lo, tri);
          Perm4 phi{};
          for (int q : tri) phi[ln[q]] = lo[q];
          phi[ln[mn]] = lo[mo];
          ext.push_back({cfg.oldTets[inOld[0]], lo[mo], r.newIds[inNew[0]], ln[mn], phi});
        }
      }

  for (size_t a = 0; a < ext.size(); ++a) {
    const External& ea = ext[a];
    const Gluing& g = T.gluing(ea.oldTet, ea.oldFace);
    if (!removed[g.tet]) {
      ps.push_back(pairingFromPerm(ea.newTet, ea.newFace, r.tetMap[g.tet], compose(g.perm, ea.phi)));
      continue;
    }
    size_t b = 0;
    while (b < ext.size() && !(ext[b].oldTet == g.tet && ext[b].oldFace == g.face)) ++b;
    if (b == ext.size()) fail(ErrorKind::InvalidSite, "move configuration is glued to itself inconsistently");
    if (b < a) continue;
    Perm4 p = compose(inverse(ext[b].phi), compose(g.perm, ea.phi));
    ps.push_back(pairingFromPerm(ea.newTet, ea.newFace, ext[b].newTet, p));
  }

  Triangulation Tn = Triangulation::build(total, ps, {}, 1);
  // a new tet lies on the same side of an outer face as the old tet it replaces
  const External& e0 = ext.front();
  if (Tn.orientation(e0.newTet) != T.orientation(e0.oldTet) * parity(e0.phi))
    Tn = Tn.withOrientation(-Tn.orientation0());

  auto posOf = [&](int i, int v) {
    for (int p = 0; p < 5; ++p)
      if (cfg.oldLocal[i][p] == v) return p;
    return -1;
  };
  auto newEdge = [&](int pa, int pb) {
    for (int j = 0; j < nNew; ++j) {
      const Local5& l = r.newLocal[j];
      if (l[pa] >= 0 && l[pb] >= 0) return Tn.edgeClass(r.newIds[j], edgeIndex(l[pa], l[pb]));
    }
    return -1;
  };
  auto newVertex = [&](int p) {
    for (int j = 0; j < nNew; ++j)
      if (r.newLocal[j][p] >= 0) return Tn.vertexClass(r.newIds[j], r.newLocal[j][p]);
    return -1;
  };

  r.edgeMap.assign(T.numEdges(), -1);
  for (int s = 0; s < T.numEdges(); ++s) {
    int val = -2;
    for (auto [t, e] : T.edgePreimages(s)) {
      int m;
      if (!removed[t]) {
        m = Tn.edgeClass(r.tetMap[t], e);
      } else {
        int i = oldIndex[t];
        m = newEdge(posOf(i, kEdgeVertex[e][0]), posOf(i, kEdgeVertex[e][1]));
      }
      if (val == -2) val = m;
      else if (val != m) fail(ErrorKind::InvalidSite, "edge classes do not survive the move consistently");
    }
    r.edgeMap[s] = val;
  }
  r.vertexMap.assign(T.numVertices(), -1);
  for (int w = 0; w < T.numVertices(); ++w) {
    auto [t, v] = T.vertexPreimages(w).front();
    r.vertexMap[w] = removed[t] ? newVertex(posOf(oldIndex[t], v)) : Tn.vertexClass(r.tetMap[t], v);
  }
  r.special = newEdge(cfg.posD, cfg.posE);

  std::vector<int> H;
  for (int s : T.hamiltonianIds()) {
    if (r.edgeMap[s] < 0) fail(ErrorKind::HamiltonianEdge, "the move removes an edge of H");
    H.push_back(r.edgeMap[s]);
  }
  r.T = Tn.withHamiltonian(H);
  return r;
}

Config config23(const Triangulation& T, const std::vector<Branching>& b, int t0, int f0) {
  if (t0 < 0 || t0 >= T.size() || f0 < 0 || f0 > 3) fail(ErrorKind::InvalidArgument, "no such face");
  const Gluing& g = T.gluing(t0, f0);
  const int t1 = g.tet, f1 = g.face;
  if (t1 == t0) fail(ErrorKind::NotAdjacent, "the face is glued to its own tetrahedron");
  auto fv = faceVertices(f0);
  std::sort(fv.begin(), fv.end(), [&](int x, int y) { return b[t0].rank[x] < b[t0].rank[y]; });
  for (int i = 0; i < 2; ++i)
    if (b[t1].rank[g.perm[fv[i]]] > b[t1].rank[g.perm[fv[i + 1]]])
      fail(ErrorKind::NonBrancheable, "branchings disagree across the face");
  const int rD = b[t0].rank[f0], rE = b[t1].rank[f1];
  Config c;
  c.adjacent = rD == rE;
  c.posD = rD + (rE < rD ? 1 : 0);
  c.posE = rE + (rD <= rE ? 1 : 0);
  Local5 l0, l1;
  l0.fill(-1);
  l1.fill(-1);
  l0[c.posD] = f0;
  l1[c.posE] = f1;
  for (int i = 0; i < 3; ++i) {
    int pos = i + (rD <= i ? 1 : 0) + (rE <= i ? 1 : 0);
    l0[pos] = fv[i];
    l1[pos] = g.perm[fv[i]];
    c.newMissing.push_back(pos);
  }
  c.oldTets = {t0, t1};
  c.oldLocal = {l0, l1};
  return c;
}

Config config32(const Triangulation& T, const std::vector<Branching>& b, int s) {
  if (s < 0 || s >= T.numEdges()) fail(ErrorKind::InvalidArgument, "no such edge");
  const auto& pre = T.edgePreimages(s);
  if (pre.size() != 3) fail(ErrorKind::BadValence, "edge has valence " + std::to_string(pre.size()));
  if (pre[0].first == pre[1].first || pre[0].first == pre[2].first || pre[1].first == pre[2].first)
    fail(ErrorKind::BadValence, "edge meets a tetrahedron twice");
  if (T.inHamiltonian(s)) fail(ErrorKind::HamiltonianEdge, "edge lies in H");

  auto [t, e] = pre[0];
  int x = kEdgeVertex[e][0], y = kEdgeVertex[e][1];
  if (b[t].rank[x] > b[t].rank[y]) std::swap(x, y);
  std::array<int, 2> uv{};
  for (int v = 0, k = 0; v < 4; ++v)
    if (v != x && v != y) uv[k++] = v;

  // abstract vertices: 0 = tail, 1 = head, 2..4 = the link of the edge
  std::array<int, 3> tets{};
  std::array<std::array<int, 5>, 3> loc{};
  for (auto& l : loc) l.fill(-1);
  tets[0] = t;
  loc[0] = {x, y, uv[0], uv[1], -1};
  const Gluing& g1 = T.gluing(t, uv[0]);
  tets[1] = g1.tet;
  loc[1][0] = g1.perm[x];
  loc[1][1] = g1.perm[y];
  loc[1][3] = g1.perm[uv[1]];
  loc[1][4] = g1.face;
  const Gluing& g2 = T.gluing(tets[1], loc[1][3]);
  tets[2] = g2.tet;
  loc[2][0] = g2.perm[loc[1][0]];
  loc[2][1] = g2.perm[loc[1][1]];
  loc[2][4] = g2.perm[loc[1][4]];
  loc[2][2] = g2.face;
  const Gluing& g3 = T.gluing(tets[2], loc[2][4]);
  if (g3.tet != t || g3.face != uv[1] || g3.perm[loc[2][0]] != x || g3.perm[loc[2][1]] != y ||
      g3.perm[loc[2][2]] != uv[0])
    fail(ErrorKind::BadValence, "the link of the edge is not a triangle");
  if (tets[0] == tets[1] || tets[1] == tets[2] || tets[0] == tets[2])
    fail(ErrorKind::BadValence, "edge meets a tetrahedron twice");

  int less[5][5] = {};
  for (int j = 0; j < 3; ++j)
    for (int p = 0; p < 5; ++p)
      for (int q = 0; q < 5; ++q) {
        if (p == q || loc[j][p] < 0 || loc[j][q] < 0) continue;
        int want = b[tets[j]].rank[loc[j][p]] < b[tets[j]].rank[loc[j][q]] ? 1 : -1;
        if (less[p][q] == -want) fail(ErrorKind::NonBrancheable, "branchings around the edge are incompatible");
        less[p][q] = want;
      }
  std::array<int, 5> pos{};
  std::array<bool, 5> seen{};
  for (int p = 0; p < 5; ++p) {
    for (int q = 0; q < 5; ++q)
      if (q != p && less[q][p] == 1) ++pos[p];
    if (seen[pos[p]]) fail(ErrorKind::NonBrancheable, "branchings around the edge contain a cycle");
    seen[pos[p]] = true;
  }
  Config c;
  c.posD = pos[0];
  c.posE = pos[1];
  for (int j = 0; j < 3; ++j) {
    Local5 l;
    l.fill(-1);
    for (int p = 0; p < 5; ++p)
      if (loc[j][p] >= 0) l[pos[p]] = loc[j][p];
    c.oldTets.push_back(tets[j]);
    c.oldLocal.push_back(l);
  }
  c.newMissing = {std::min(c.posD, c.posE), std::max(c.posD, c.posE)};
  return c;
}

// Charges of the new tetrahedra keeping every per-tet sum 1 and every surviving local edge
// sum, least max-norm among those with [c] = 0.
std::vector<std::array<int, 6>> transitCharges(const Config& cfg, const Rebuilt& r,
                                               const std::vector<std::array<int, 6>>& oldC) {
  const int nNew = static_cast<int>(r.newIds.size());
  std::vector<std::array<int, 6>> c(r.T.size());
  for (size_t t = 0; t < r.tetMap.size(); ++t)
    if (r.tetMap[t] >= 0) c[r.tetMap[t]] = oldC[t];
  const int n = 3 * nNew;
  IMat A;
  IVec rhs;
  for (int j = 0; j < nNew; ++j) {
    IVec row(n, 0);
    row[3 * j] = row[3 * j + 1] = row[3 * j + 2] = 1;
    A.push_back(row);
    rhs.push_back(1);
  }
  for (int p = 0; p < 5; ++p)
    for (int q = p + 1; q < 5; ++q) {
      if ((p == cfg.posD && q == cfg.posE) || (p == cfg.posE && q == cfg.posD)) continue;
      IVec row(n, 0);
      long long target = 0;
      for (int j = 0; j < nNew; ++j) {
        const Local5& l = r.newLocal[j];
        if (l[p] >= 0 && l[q] >= 0) row[3 * j + pairOfLocalEdge(edgeIndex(l[p], l[q]))] += 1;
      }
      for (size_t i = 0; i < cfg.oldTets.size(); ++i) {
        const Local5& l = cfg.oldLocal[i];
        if (l[p] >= 0 && l[q] >= 0) target += oldC[cfg.oldTets[i]][edgeIndex(l[p], l[q])];
      }
      A.push_back(row);
      rhs.push_back(target);
    }
  auto sol = solveInteger(A, rhs, n);
  if (!sol.consistent) fail(ErrorKind::NoValidCharge, "no charge on the new tetrahedra matches the old edge sums");
  const auto cycles = r.T.dualCycles();
  auto fill = [&](const IVec& v) {
    for (int j = 0; j < nNew; ++j)
      for (int e = 0; e < 6; ++e) c[r.newIds[j]][e] = static_cast<int>(v[3 * j + pairOfLocalEdge(e)]);
  };
  auto accept = [&](const IVec& v) {
    fill(v);
    for (int x : chargeClass(cycles, c))
      if (x) return false;
    return true;
  };
  IVec best;
  try {
    best = minimizeMaxNorm(sol.particular, sol.kernel, accept, 2);
  } catch (const Error&) {
    fail(ErrorKind::NoValidCharge, "no transited charge has vanishing class");
  }
  fill(best);
  return c;
}

void recordMove(MoveRecord& m, const Config& cfg, const Rebuilt& r) {
  m.posLow = std::min(cfg.posD, cfg.posE);
  m.posHigh = std::max(cfg.posD, cfg.posE);
  m.admissible = isAdmissible(cfg.posD, cfg.posE) && !cfg.adjacent;
  m.adjacentApices = cfg.adjacent;
  m.oldTets = cfg.oldTets;
  m.oldLocal = cfg.oldLocal;
  m.newTets = r.newIds;
  m.newLocal = r.newLocal;
  m.tetMap = r.tetMap;
  m.edgeMap = r.edgeMap;
  m.vertexMap = r.vertexMap;
}

// theta/alpha/beta of the three tets in `ids` containing the move edge
void recordTheta(MoveRecord& m, const std::vector<int>& ids, const std::vector<Local5>& local,
                 const std::vector<std::array<int, 6>>& c) {
  for (int j = 0; j < 3; ++j) {
    const Local5& l = local[j];
    int e0 = edgeIndex(l[m.posLow], l[m.posHigh]);
    int p0 = pairOfLocalEdge(e0);
    std::array<int, 3> pairs{};
    for (int e = 0; e < 3; ++e) pairs[e] = c[ids[j]][e];  // edges 01,02,03 represent the pairs
    m.theta[j] = pairs[p0];
    m.alpha[j] = pairs[(p0 + 1) % 3];
    m.beta[j] = pairs[(p0 + 2) % 3];
  }
}

template <class S>
bool nearZero(const S& x) {
  if constexpr (std::is_same_v<S, Complex>)
    return std::abs(x) < 1e-13;
  else
    return isZero(x);
}

template <class S>
Decoration<S> carryDecoration(const Triangulation& T, const Decoration<S>& D, const Rebuilt& r) {
  Decoration<S> N;
  const int total = r.T.size();
  N.b.assign(total, Branching::identity());
  N.sign.assign(total, 1);
  N.c.assign(total, {});
  for (int t = 0; t < T.size(); ++t)
    if (r.tetMap[t] >= 0) {
      N.b[r.tetMap[t]] = D.b[t];
      N.sign[r.tetMap[t]] = D.sign[t];
      N.c[r.tetMap[t]] = D.c[t];
    }
  N.z.assign(r.T.numEdges(), Borel<S>{});
  for (int s = 0; s < T.numEdges(); ++s)
    if (r.edgeMap[s] >= 0) N.z[r.edgeMap[s]] = D.z[s];
  return N;
}

}  // namespace

template <class S>
TransitResult<S> transit23(const Triangulation& T, const Decoration<S>& D, int tet, int face) {
  Config cfg = config23(T, D.b, tet, face);
  Rebuilt r = rebuild(T, cfg);
  TransitResult<S> out;
  MoveRecord& m = out.move;
  m.kind = MoveKind::TwoThree;
  recordMove(m, cfg, r);
  // an old tet missing position k carries -osign (-1)^k, a new one osign (-1)^k
  m.osign = -D.sign[cfg.oldTets[0]] * alt(cfg.posE);
  if (D.sign[cfg.oldTets[1]] != -m.osign * alt(cfg.posD))
    fail(ErrorKind::InvalidDecoration, "signs of the two tetrahedra do not fit one move");

  Decoration<S> N = carryDecoration(T, D, r);
  for (size_t j = 0; j < r.newIds.size(); ++j) N.sign[r.newIds[j]] = m.osign * alt(cfg.newMissing[j]);

  auto zOld = [&](int p, int q) {
    for (size_t i = 0; i < cfg.oldTets.size(); ++i) {
      const Local5& l = cfg.oldLocal[i];
      if (l[p] >= 0 && l[q] >= 0) return D.z[T.edgeClass(cfg.oldTets[i], edgeIndex(l[p], l[q]))];
    }
    fail(ErrorKind::InvalidSite, "missing edge in the move configuration");
  };
  const int lo = m.posLow, hi = m.posHigh, a = cfg.newMissing[0];
  Borel<S> zNew;
  if (a < lo) zNew = inverse(zOld(a, lo)) * zOld(a, hi);
  else if (a < hi) zNew = zOld(lo, a) * zOld(a, hi);
  else zNew = zOld(lo, a) * inverse(zOld(hi, a));
  if (nearZero(zNew.x)) fail(ErrorKind::FullnessLost, "the new edge carries x = 0");
  N.z[r.special] = zNew;
  m.edge = r.special;

  N.c = transitCharges(cfg, r, D.c);
  recordTheta(m, r.newIds, r.newLocal, N.c);
  out.T = r.T;
  out.D = std::move(N);
  return out;
}

template <class S>
TransitResult<S> transit32(const Triangulation& T, const Decoration<S>& D, int edge) {
  Config cfg = config32(T, D.b, edge);
  Rebuilt r = rebuild(T, cfg);
  TransitResult<S> out;
  MoveRecord& m = out.move;
  m.kind = MoveKind::ThreeTwo;
  recordMove(m, cfg, r);
  m.edge = edge;
  auto missing = [&](int i) {
    for (int p = 0; p < 5; ++p)
      if (cfg.oldLocal[i][p] < 0) return p;
    return -1;
  };
  m.osign = D.sign[cfg.oldTets[0]] * alt(missing(0));
  for (int i = 1; i < 3; ++i)
    if (D.sign[cfg.oldTets[i]] != m.osign * alt(missing(i)))
      fail(ErrorKind::InvalidDecoration, "signs around the edge do not fit one move");
  recordTheta(m, cfg.oldTets, cfg.oldLocal, D.c);

  Decoration<S> N = carryDecoration(T, D, r);
  for (size_t j = 0; j < r.newIds.size(); ++j) N.sign[r.newIds[j]] = -m.osign * alt(cfg.newMissing[j]);
  N.c = transitCharges(cfg, r, D.c);
  out.T = r.T;
  out.D = std::move(N);
  return out;
}

template <class S>
TransitResult<S> transitBubble(const Triangulation& T, const Decoration<S>& D, int tet, int face,
                               std::optional<Borel<S>> g) {
  if (tet < 0 || tet >= T.size() || face < 0 || face > 3) fail(ErrorKind::InvalidArgument, "no such face");
  auto fv = faceVertices(face);
  std::sort(fv.begin(), fv.end(), [&](int x, int y) { return D.b[tet].rank[x] < D.b[tet].rank[y]; });
  int hu = -1, hv = -1;
  for (int e = 0; e < 6 && hu < 0; ++e) {
    int x = kEdgeVertex[e][0], y = kEdgeVertex[e][1];
    if (x == face || y == face || !T.inHamiltonian(T.edgeClass(tet, e))) continue;
    for (int i = 0; i < 3; ++i) {
      if (fv[i] == x || fv[i] == y) (hu < 0 ? hu : hv) = i;
    }
  }
  if (hu < 0) fail(ErrorKind::InvalidSite, "the face has no edge in H");

  const Gluing g0 = T.gluing(tet, face);
  const int k = T.size(), P1 = k, P2 = k + 1;
  std::vector<FacePairing> ps;
  for (const auto& p : T.pairings()) {
    if ((p.srcTet == tet && p.srcFace == face) || (p.dstTet == tet && p.dstFace == face)) continue;
    ps.push_back(p);
  }
  Perm4 p1{fv[0], fv[1], fv[2], face};
  ps.push_back(pairingFromPerm(P1, 3, tet, p1));
  ps.push_back(pairingFromPerm(P2, 3, g0.tet, compose(g0.perm, p1)));
  for (int j = 0; j < 3; ++j) ps.push_back(pairingFromPerm(P1, j, P2, identityPerm()));
  Triangulation Tn = Triangulation::build(k + 2, ps, {}, 1);
  if (Tn.orientation(tet) != T.orientation(tet)) Tn = Tn.withOrientation(-Tn.orientation0());

  TransitResult<S> out;
  MoveRecord& m = out.move;
  m.kind = MoveKind::Bubble;
  m.oldTets = {tet};
  m.newTets = {P1, P2};
  m.tetMap.resize(k);
  for (int t = 0; t < k; ++t) m.tetMap[t] = t;
  m.edgeMap.assign(T.numEdges(), -1);
  for (int s = 0; s < T.numEdges(); ++s) {
    auto [t, e] = T.edgePreimages(s).front();
    m.edgeMap[s] = Tn.edgeClass(t, e);
  }
  m.vertexMap.assign(T.numVertices(), -1);
  for (int w = 0; w < T.numVertices(); ++w) {
    auto [t, v] = T.vertexPreimages(w).front();
    m.vertexMap[w] = Tn.vertexClass(t, v);
  }
  m.vertex = Tn.vertexClass(P1, 3);
  const int oldH = T.edgeClass(tet, edgeIndex(fv[hu], fv[hv]));
  m.edge = oldH;
  std::vector<int> H;
  for (int s : T.hamiltonianIds())
    if (s != oldH) H.push_back(m.edgeMap[s]);
  H.push_back(Tn.edgeClass(P1, edgeIndex(hu, 3)));
  H.push_back(Tn.edgeClass(P1, edgeIndex(hv, 3)));
  Tn = Tn.withHamiltonian(H);

  Decoration<S> N;
  N.b = D.b;
  N.b.resize(k + 2, Branching::identity());
  // keep whatever global sign convention the input uses
  const int eps = D.sign[tet] * orientationSign(T, tet, D.b[tet]);
  N.sign = D.sign;
  N.sign.push_back(eps * Tn.orientation(P1));
  N.sign.push_back(eps * Tn.orientation(P2));
  N.z.assign(Tn.numEdges(), Borel<S>{});
  for (int s = 0; s < T.numEdges(); ++s) N.z[m.edgeMap[s]] = D.z[s];
  const Borel<S> zab = D.z[T.edgeClass(tet, edgeIndex(fv[0], fv[1]))];
  const Borel<S> zac = D.z[T.edgeClass(tet, edgeIndex(fv[0], fv[2]))];
  auto spokes = [&](const Borel<S>& ga) {
    return std::array<Borel<S>, 3>{ga, inverse(zab) * ga, inverse(zac) * ga};
  };
  auto full = [&](const std::array<Borel<S>, 3>& z) {
    return !nearZero(z[0].x) && !nearZero(z[1].x) && !nearZero(z[2].x);
  };
  std::array<Borel<S>, 3> zw;
  if (g) {
    zw = spokes(*g);
    if (!full(zw)) fail(ErrorKind::FullnessLost, "a new edge carries x = 0");
  } else {
    bool found = false;
    for (auto [t, x] : {std::pair{1, 1}, {1, 2}, {2, 1}, {1, 3}, {3, -1}, {2, 5}, {5, -3}}) {
      zw = spokes(Borel<S>{S(t), S(x)});
      if (full(zw)) {
        found = true;
        break;
      }
    }
    if (!found) fail(ErrorKind::FullnessLost, "no full cocycle value for the new vertex");
  }
  for (int i = 0; i < 3; ++i) N.z[Tn.edgeClass(P1, edgeIndex(i, 3))] = zw[i];

  // pillow charges: the pair of the rerouted edge sums to 2 over both tets, the others to 0
  N.c = D.c;
  N.c.resize(k + 2);
  const int p0 = pairOfLocalEdge(edgeIndex(hu, hv));
  const auto cycles = Tn.dualCycles();
  std::vector<std::array<long long, 3>> cand;
  for (int a = -3; a <= 3; ++a)
    for (int b = -3; b <= 3; ++b) {
      std::array<long long, 3> c1{};
      c1[p0] = a;
      c1[(p0 + 1) % 3] = b;
      c1[(p0 + 2) % 3] = 1 - a - b;
      cand.push_back(c1);
    }
  auto norm = [&](const std::array<long long, 3>& c1) {
    long long n = 0;
    for (int i = 0; i < 3; ++i) {
      long long c2 = (i == p0 ? 2 : 0) - c1[i];
      n = std::max({n, std::abs(c1[i]), std::abs(c2)});
    }
    return n;
  };
  std::stable_sort(cand.begin(), cand.end(), [&](const auto& x, const auto& y) { return norm(x) < norm(y); });
  bool found = false;
  for (const auto& c1 : cand) {
    for (int e = 0; e < 6; ++e) {
      int pe = pairOfLocalEdge(e);
      N.c[P1][e] = static_cast<int>(c1[pe]);
      N.c[P2][e] = static_cast<int>((pe == p0 ? 2 : 0) - c1[pe]);
    }
    bool ok = true;
    for (int x : chargeClass(cycles, N.c)) ok = ok && x == 0;
    if (ok) {
      found = true;
      break;
    }
  }
  if (!found) fail(ErrorKind::NoValidCharge, "no pillow charge with vanishing class");
  out.T = Tn;
  out.D = std::move(N);
  return out;
}

template <class S>
TransitResult<S> transitUnbubble(const Triangulation& T, const Decoration<S>& D, int vertex) {
  if (vertex < 0 || vertex >= T.numVertices()) fail(ErrorKind::InvalidArgument, "no such vertex");
  const auto& pre = T.vertexPreimages(vertex);
  if (pre.size() != 2 || pre[0].first == pre[1].first)
    fail(ErrorKind::InvalidSite, "vertex is not the tip of a two-tetrahedron pillow");
  auto [P1, v1] = pre[0];
  auto [P2, v2] = pre[1];
  Perm4 sigma{};
  bool first = true;
  for (int f = 0; f < 4; ++f) {
    if (f == v1) continue;
    const Gluing& g = T.gluing(P1, f);
    if (g.tet != P2 || g.perm[v1] != v2 || (!first && g.perm != sigma))
      fail(ErrorKind::InvalidSite, "the two tetrahedra at the vertex do not form a pillow");
    sigma = g.perm;
    first = false;
  }
  const Gluing g1 = T.gluing(P1, v1), g2 = T.gluing(P2, v2);
  if (g1.tet == P2 || g1.tet == P1) fail(ErrorKind::InvalidSite, "the pillow is a closed component");

  // H edges at the vertex, as edges of P1
  std::vector<int> hx;
  for (int u = 0; u < 4; ++u)
    if (u != v1 && T.inHamiltonian(T.edgeClass(P1, edgeIndex(u, v1)))) hx.push_back(u);
  if (hx.size() != 2) fail(ErrorKind::InvalidSite, "H does not pass through the vertex");
  const int innerOld = T.edgeClass(P1, edgeIndex(hx[0], hx[1]));
  if (T.inHamiltonian(innerOld)) fail(ErrorKind::InvalidSite, "removing the vertex would double an edge of H");

  const int k = T.size();
  std::vector<int> dropped{std::min(P1, P2), std::max(P1, P2)};
  std::vector<int> tetMap(k, -1);
  for (int t = 0; t < k; ++t)
    if (t != P1 && t != P2) tetMap[t] = shifted(dropped, t);
  std::vector<FacePairing> ps;
  for (const auto& p : T.pairings()) {
    if (p.srcTet == P1 || p.srcTet == P2 || p.dstTet == P1 || p.dstTet == P2) continue;
    FacePairing q = p;
    q.srcTet = tetMap[p.srcTet];
    q.dstTet = tetMap[p.dstTet];
    ps.push_back(q);
  }
  Perm4 across = compose(g2.perm, compose(sigma, inverse(g1.perm)));
  ps.push_back(pairingFromPerm(tetMap[g1.tet], g1.face, tetMap[g2.tet], across));
  Triangulation Tn = Triangulation::build(k - 2, ps, {}, 1);
  if (Tn.orientation(tetMap[g1.tet]) != T.orientation(g1.tet)) Tn = Tn.withOrientation(-Tn.orientation0());

  TransitResult<S> out;
  MoveRecord& m = out.move;
  m.kind = MoveKind::Unbubble;
  m.oldTets = {P1, P2};
  m.tetMap = tetMap;
  m.vertex = vertex;
  m.edgeMap.assign(T.numEdges(), -1);
  for (int s = 0; s < T.numEdges(); ++s)
    for (auto [t, e] : T.edgePreimages(s))
      if (tetMap[t] >= 0) {
        m.edgeMap[s] = Tn.edgeClass(tetMap[t], e);
        break;
      }
  m.vertexMap.assign(T.numVertices(), -1);
  for (int w = 0; w < T.numVertices(); ++w)
    for (auto [t, v] : T.vertexPreimages(w))
      if (tetMap[t] >= 0) {
        m.vertexMap[w] = Tn.vertexClass(tetMap[t], v);
        break;
      }
  const int innerNew = Tn.edgeClass(tetMap[g1.tet], edgeIndex(g1.perm[hx[0]], g1.perm[hx[1]]));
  m.edge = innerNew;
  std::vector<int> H;
  for (int s : T.hamiltonianIds())
    if (m.edgeMap[s] >= 0) H.push_back(m.edgeMap[s]);
  H.push_back(innerNew);
  Tn = Tn.withHamiltonian(H);

  // the pillow's contribution to the three outer face edges must be 2 on the new H edge, 0 else
  for (int e = 0; e < 6; ++e) {
    int x = kEdgeVertex[e][0], y = kEdgeVertex[e][1];
    if (x == v1 || y == v1) continue;
    int got = D.c[P1][e] + D.c[P2][edgeIndex(sigma[x], sigma[y])];
    int want = (e == edgeIndex(hx[0], hx[1])) ? 2 : 0;
    if (got != want) fail(ErrorKind::NoValidCharge, "pillow charges do not cancel");
  }

  Decoration<S> N;
  N.b.assign(k - 2, Branching::identity());
  N.sign.assign(k - 2, 1);
  N.c.assign(k - 2, {});
  for (int t = 0; t < k; ++t)
    if (tetMap[t] >= 0) {
      N.b[tetMap[t]] = D.b[t];
      N.sign[tetMap[t]] = D.sign[t];
      N.c[tetMap[t]] = D.c[t];
    }
  N.z.assign(Tn.numEdges(), Borel<S>{});
  for (int s = 0; s < T.numEdges(); ++s)
    if (m.edgeMap[s] >= 0) N.z[m.edgeMap[s]] = D.z[s];
  if (!chargeCheck(Tn, N.c).ok()) fail(ErrorKind::NoValidCharge, "charge after removing the pillow is invalid");
  out.T = Tn;
  out.D = std::move(N);
  return out;
}

template <class S>
IdealTransitResult<S> transitIdeal23(const Triangulation& T, const std::vector<IdealTetrahedron<S>>& tets, int tet,
                                     int face) {
  std::vector<Branching> b;
  std::vector<std::array<int, 6>> oldC;
  for (const auto& t : tets) {
    b.push_back(t.b);
    oldC.push_back(t.c);
  }
  Config cfg = config23(T, b, tet, face);
  Rebuilt r = rebuild(T, cfg);
  IdealTransitResult<S> out;
  MoveRecord& m = out.move;
  m.kind = MoveKind::TwoThree;
  recordMove(m, cfg, r);
  m.edge = r.special;
  m.osign = -tets[cfg.oldTets[0]].sign * alt(cfg.posE);

  // develop the five vertices: face vertices at 0, 1, infinity
  using Pt = ProjectivePoint<S>;
  std::array<Pt, 5> P;
  P[cfg.newMissing[0]] = Pt{S(0), S(1)};
  P[cfg.newMissing[1]] = Pt{S(1), S(1)};
  P[cfg.newMissing[2]] = Pt{S(1), S(0)};
  auto develop = [&](int i, int unknown) {
    std::array<int, 4> v{};
    int j = -1;
    for (int p = 0, n = 0; p < 5; ++p)
      if (cfg.oldLocal[i][p] >= 0) {
        if (p == unknown) j = n;
        v[n++] = p;
      }
    const S& w = tets[cfg.oldTets[i]].w.w0;
    // cross-ratio [v2,v1][v3,v0] / ([v2,v0][v3,v1]) = w, linear in the unknown point
    auto side = [&](int a, int bb, int& s) {
      if (a == j) { s = 1; return bb; }
      s = -1;
      return a;
    };
    int sN, sD;
    int pn, kn0, kn1, pd, kd0, kd1;
    if (j == 1 || j == 2) { pn = side(2, 1, sN); kn0 = 3; kn1 = 0; }
    else { pn = side(3, 0, sN); kn0 = 2; kn1 = 1; }
    if (j == 0 || j == 2) { pd = side(2, 0, sD); kd0 = 3; kd1 = 1; }
    else { pd = side(3, 1, sD); kd0 = 2; kd1 = 0; }
    S KN = bracket(P[v[kn0]], P[v[kn1]]);
    S KD = bracket(P[v[kd0]], P[v[kd1]]);
    const Pt& PN = P[v[pn]];
    const Pt& PD = P[v[pd]];
    S a = S(sN) * KN, d = w * S(sD) * KD;
    Pt U{a * PN.x - d * PD.x, a * PN.y - d * PD.y};
    if (isZero(U.x) && isZero(U.y)) fail(ErrorKind::DegenerateModuli, "apex cannot be developed");
    return U;
  };
  P[cfg.posD] = develop(0, cfg.posD);
  P[cfg.posE] = develop(1, cfg.posE);
  if (isZero(bracket(P[cfg.posD], P[cfg.posE]))) fail(ErrorKind::DegenerateModuli, "the two apices coincide");

  auto newC = transitCharges(cfg, r, oldC);
  out.tets.resize(r.T.size());
  for (int t = 0; t < T.size(); ++t)
    if (r.tetMap[t] >= 0) out.tets[r.tetMap[t]] = tets[t];
  for (size_t j = 0; j < r.newIds.size(); ++j) {
    std::array<Pt, 4> v;
    for (int p = 0, n = 0; p < 5; ++p)
      if (r.newLocal[j][p] >= 0) v[n++] = P[p];
    IdealTetrahedron<S> t;
    t.sign = m.osign * alt(cfg.newMissing[j]);
    t.b = Branching::identity();
    t.w = completeTriple(crossRatio(v));
    t.c = newC[r.newIds[j]];
    out.tets[r.newIds[j]] = t;
  }
  recordTheta(m, r.newIds, r.newLocal, newC);
  out.T = r.T;
  return out;
}

std::vector<std::array<long long, 2>> transitFlattening23(const std::vector<IdealTetrahedron<Complex>>& oldTets,
                                                          const std::vector<std::array<long long, 2>>& oldPq,
                                                          const IdealTransitResult<Complex>& res) {
  const MoveRecord& m = res.move;
  const int nNew = static_cast<int>(m.newTets.size());
  static constexpr long long kCoef[3][2] = {{1, 0}, {0, 1}, {-1, -1}};
  auto pairIn = [](const Branching& b, int la, int lb) { return pairOfPositions(b.rank[la], b.rank[lb]); };
  IMat A;
  IVec rhs;
  for (int p = 0; p < 5; ++p)
    for (int q = p + 1; q < 5; ++q) {
      if (p == m.posLow && q == m.posHigh) continue;
      IVec row(2 * nNew, 0);
      Complex acc = 0;
      for (int j = 0; j < nNew; ++j) {
        const Local5& l = m.newLocal[j];
        if (l[p] < 0 || l[q] < 0) continue;
        const auto& t = res.tets[m.newTets[j]];
        int pr = pairIn(t.b, l[p], l[q]);
        row[2 * j] += t.sign * kCoef[pr][0];
        row[2 * j + 1] += t.sign * kCoef[pr][1];
        acc -= static_cast<double>(t.sign) * logParameters(t.w.w0, 0, 0)[pr];
      }
      for (size_t i = 0; i < m.oldTets.size(); ++i) {
        const Local5& l = m.oldLocal[i];
        if (l[p] < 0 || l[q] < 0) continue;
        const auto& t = oldTets[m.oldTets[i]];
        const auto& pq = oldPq[m.oldTets[i]];
        acc += static_cast<double>(t.sign) * logParameters(t.w.w0, pq[0], pq[1])[pairIn(t.b, l[p], l[q])];
      }
      Complex k = acc / Complex(0, std::numbers::pi);
      long long kr = std::llround(k.real());
      if (std::abs(k.real() - static_cast<double>(kr)) > 1e-6 || std::abs(k.imag()) > 1e-6)
        fail(ErrorKind::NoSolution, "log-parameter sums differ by a non-integer multiple of pi i");
      A.push_back(row);
      rhs.push_back(kr);
    }
  auto sol = solveInteger(A, rhs, 2 * nNew);
  if (!sol.consistent) fail(ErrorKind::NoSolution, "no flattening of the new tetrahedra");
  IVec x = minimizeMaxNorm(sol.particular, sol.kernel);
  std::vector<std::array<long long, 2>> out(res.tets.size());
  for (size_t t = 0; t < m.tetMap.size(); ++t)
    if (m.tetMap[t] >= 0) out[m.tetMap[t]] = oldPq[t];
  for (int j = 0; j < nNew; ++j) out[m.newTets[j]] = {x[2 * j], x[2 * j + 1]};
  return out;
}

template <class S>
TransitResult<S> applyMove(const Triangulation& T, const Decoration<S>& D, const MoveSpec& m) {
  switch (m.kind) {
    case MoveKind::TwoThree: return transit23(T, D, m.tet, m.face);
    case MoveKind::ThreeTwo: return transit32(T, D, m.edge);
    case MoveKind::Bubble: return transitBubble(T, D, m.tet, m.face);
    case MoveKind::Unbubble: return transitUnbubble(T, D, m.vertex);
  }
  fail(ErrorKind::InvalidArgument, "unknown move");
}

template <class S>
std::vector<MoveSpec> admissibleSites23(const Triangulation& T, const Decoration<S>& D) {
  std::vector<MoveSpec> out;
  for (int t = 0; t < T.size(); ++t)
    for (int f = 0; f < 4; ++f) {
      const Gluing& g = T.gluing(t, f);
      if (g.tet <= t) continue;
      try {
        auto r = transit23(T, D, t, f);
        if (r.move.admissible) out.push_back({MoveKind::TwoThree, t, f, -1, -1});
      } catch (const Error&) {
      }
    }
  return out;
}

template <class S>
bool sameDecorated(const Triangulation& A, const Decoration<S>& DA, const Triangulation& B, const Decoration<S>& DB,
                   double tol) {
  if (A.size() != B.size() || A.numEdges() != B.numEdges() || A.numVertices() != B.numVertices()) return false;
  auto allowed = [&](int ta, int tb, const Perm4& p) {
    for (int v = 0; v < 4; ++v)
      if (p[v] != DB.b[tb].order[DA.b[ta].rank[v]]) return false;
    if (DA.sign[ta] != DB.sign[tb]) return false;
    for (int e = 0; e < 6; ++e) {
      int eb = edgeIndex(p[kEdgeVertex[e][0]], p[kEdgeVertex[e][1]]);
      if (DA.c[ta][e] != DB.c[tb][eb]) return false;
      int sa = A.edgeClass(ta, e), sb = B.edgeClass(tb, eb);
      if (A.inHamiltonian(sa) != B.inHamiltonian(sb)) return false;
      if (!nearlyEqual(DA.z[sa], DB.z[sb], tol)) return false;
    }
    return true;
  };
  return findIsomorphism(A, B, allowed).has_value();
}

#define QHI_INSTANTIATE(S)                                                                                     \
  template TransitResult<S> transit23(const Triangulation&, const Decoration<S>&, int, int);                    \
  template TransitResult<S> transit32(const Triangulation&, const Decoration<S>&, int);                        \
  template TransitResult<S> transitBubble(const Triangulation&, const Decoration<S>&, int, int,                \
                                          std::optional<Borel<S>>);                                            \
  template TransitResult<S> transitUnbubble(const Triangulation&, const Decoration<S>&, int);                  \
  template IdealTransitResult<S> transitIdeal23(const Triangulation&, const std::vector<IdealTetrahedron<S>>&, \
                                                int, int);                                                     \
  template TransitResult<S> applyMove(const Triangulation&, const Decoration<S>&, const MoveSpec&);            \
  template std::vector<MoveSpec> admissibleSites23(const Triangulation&, const Decoration<S>&);                \
  template bool sameDecorated(const Triangulation&, const Decoration<S>&, const Triangulation&,                \
                              const Decoration<S>&, double);

QHI_INSTANTIATE(Complex)
QHI_INSTANTIATE(GaussianRational)

}  // namespace qhi
