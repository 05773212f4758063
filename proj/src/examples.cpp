#include "qhi/examples.hpp"

#include <algorithm>
#include <map>
#include <numbers>
#include <numeric>
#include <set>

#include "qhi/errors.hpp"

namespace qhi {

namespace {

int mod(int a, int n) { return ((a % n) + n) % n; }

std::vector<FacePairing> glueEqualFaces(const std::vector<std::array<int, 4>>& labels,
                                        const std::function<std::set<int>(int, int)>& key,
                                        const std::function<int(int, int, int, int)>& image) {
  // key(t, f): canonical face key; image(t, f, t2, v): local vertex of t2 matching local v of t
  std::map<std::set<int>, std::vector<std::pair<int, int>>> byKey;
  for (int t = 0; t < static_cast<int>(labels.size()); ++t)
    for (int f = 0; f < 4; ++f) byKey[key(t, f)].push_back({t, f});
  std::vector<FacePairing> out;
  for (auto& [k, slots] : byKey) {
    if (slots.size() != 2) fail(ErrorKind::UnpairedFace, "a face label set occurs " + std::to_string(slots.size()) + " times");
    auto [t, f] = slots[0];
    auto [t2, f2] = slots[1];
    FacePairing p{t, f, t2, f2, {}};
    auto fv = faceVertices(f);
    for (int i = 0; i < 3; ++i) p.map[i] = image(t, fv[i], t2, f2);
    out.push_back(p);
  }
  return out;
}

template <class S>
Borel<S> inv(const Borel<S>& g) {
  return inverse(g);
}

}  // namespace

Triangulation fromLabelledTetrahedra(const std::vector<std::array<int, 4>>& labels) {
  auto key = [&](int t, int f) {
    std::set<int> s;
    for (int v = 0; v < 4; ++v)
      if (v != f) s.insert(labels[t][v]);
    return s;
  };
  auto image = [&](int t, int v, int t2, int) {
    for (int w = 0; w < 4; ++w)
      if (labels[t2][w] == labels[t][v]) return w;
    return -1;
  };
  return Triangulation::build(static_cast<int>(labels.size()), glueEqualFaces(labels, key, image));
}

int edgeWithLabels(const Triangulation& T, const std::vector<std::array<int, 4>>& labels, int a, int b) {
  for (int t = 0; t < T.size(); ++t)
    for (int e = 0; e < 6; ++e) {
      int x = labels[t][kEdgeVertex[e][0]], y = labels[t][kEdgeVertex[e][1]];
      if ((x == a && y == b) || (x == b && y == a)) return T.edgeClass(t, e);
    }
  fail(ErrorKind::InvalidArgument, "no edge with these labels");
}

Triangulation doubleTetrahedron() {
  std::vector<std::array<int, 4>> L{{0, 1, 2, 3}, {0, 1, 2, 3}};
  Triangulation T = fromLabelledTetrahedra(L);
  return T.withHamiltonian({edgeWithLabels(T, L, 0, 1), edgeWithLabels(T, L, 1, 2), edgeWithLabels(T, L, 2, 3),
                            edgeWithLabels(T, L, 3, 0)});
}

Triangulation boundaryOf4Simplex() {
  std::vector<std::array<int, 4>> L;
  for (int k = 0; k < 5; ++k) {
    std::array<int, 4> v{};
    for (int x = 0, i = 0; x < 5; ++x)
      if (x != k) v[i++] = x;
    L.push_back(v);
  }
  Triangulation T = fromLabelledTetrahedra(L);
  std::vector<int> H;
  for (int a = 0; a < 5; ++a) H.push_back(edgeWithLabels(T, L, a, (a + 1) % 5));
  return T.withHamiltonian(H);
}

namespace {

// cover vertices of the lens space join: label 2*idx + type on two cycles of length m*p
struct LensCover {
  int p, q, m, L;
  std::vector<std::array<int, 4>> tets;  // cover labels, local order a_i, a_i+1, b_j, b_j+1
  LensCover(int p_, int q_, int m_) : p(p_), q(q_), m(m_), L(m_ * p_) {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < L; ++j) tets.push_back({label(0, i), label(0, i + 1), label(1, j), label(1, j + 1)});
  }
  int label(int type, int idx) const { return 2 * mod(idx, L) + type; }
  int shift(int lab, int k) const {
    int type = lab % 2, idx = lab / 2;
    return label(type, type == 0 ? idx + k * m : idx + k * m * q);
  }
  // a vertex as g^k applied to a fundamental one (index < m)
  std::pair<int, int> fundamental(int lab) const {
    int type = lab % 2, idx = lab / 2;
    int base = idx % m, d = (idx - base) / m;
    if (type == 0) return {label(0, base), d};
    int qinv = 1;
    while (mod(qinv * q, p) != 1) ++qinv;
    return {label(1, base), mod(d * qinv, p)};
  }
};

}  // namespace

Triangulation lensSpace(int p, int q, int m) {
  if (p < 2 || std::gcd(p, q) != 1) fail(ErrorKind::InvalidArgument, "lens space needs p >= 2 and gcd(p, q) = 1");
  if (m < 2) fail(ErrorKind::InvalidArgument, "lens space cover needs m >= 2");
  LensCover C(p, q, m);
  const int n = static_cast<int>(C.tets.size());
  std::vector<FacePairing> ps;
  std::vector<std::vector<bool>> used(n, std::vector<bool>(4, false));
  for (int t = 0; t < n; ++t)
    for (int f = 0; f < 4; ++f) {
      if (used[t][f]) continue;
      auto fv = faceVertices(f);
      bool found = false;
      for (int t2 = 0; t2 < n && !found; ++t2)
        for (int f2 = 0; f2 < 4 && !found; ++f2) {
          if ((t2 == t && f2 == f) || used[t2][f2]) continue;
          for (int k = 0; k < p && !found; ++k) {
            std::array<int, 3> img{};
            bool ok = true;
            for (int i = 0; i < 3 && ok; ++i) {
              int lab = C.shift(C.tets[t][fv[i]], k);
              auto it = std::find(C.tets[t2].begin(), C.tets[t2].end(), lab);
              int w = static_cast<int>(it - C.tets[t2].begin());
              if (it == C.tets[t2].end() || w == f2) ok = false;
              else img[i] = w;
            }
            if (!ok) continue;
            ps.push_back({t, f, t2, f2, img});
            used[t][f] = used[t2][f2] = true;
            found = true;
          }
        }
      if (!found) fail(ErrorKind::UnpairedFace, "lens space face without partner");
    }
  Triangulation T = Triangulation::build(n, ps);
  std::set<int> H;
  for (int t = 0; t < n; ++t) {
    H.insert(T.edgeClass(t, edgeIndex(0, 1)));
    H.insert(T.edgeClass(t, edgeIndex(2, 3)));
  }
  return T.withHamiltonian({H.begin(), H.end()});
}

Triangulation figureEightPattern() {
  // tet 0 face f goes to tet 1 face target[f] by the odd permutation maps[f]
  const std::array<int, 4> target{0, 1, 3, 2};
  const std::array<Perm4, 4> maps{{{0, 2, 1, 3}, {2, 1, 0, 3}, {1, 2, 3, 0}, {1, 3, 0, 2}}};
  std::vector<FacePairing> ps;
  for (int f = 0; f < 4; ++f) {
    FacePairing p{0, f, 1, target[f], {}};
    auto fv = faceVertices(f);
    for (int i = 0; i < 3; ++i) p.map[i] = maps[f][fv[i]];
    ps.push_back(p);
  }
  return Triangulation::build(2, ps);
}

Triangulation oneTetrahedron() {
  // 023 -> 123 and 013 -> 012: S^3 with two vertices and three edges
  std::vector<FacePairing> ps{{0, 1, 0, 0, {1, 2, 3}}, {0, 2, 0, 3, {0, 1, 2}}};
  return Triangulation::build(1, ps);
}

std::vector<Branching> branchingFromVertexRanks(const Triangulation& T, const std::vector<int>& rank) {
  std::vector<Branching> b;
  for (int t = 0; t < T.size(); ++t) {
    Perm4 order{0, 1, 2, 3};
    std::sort(order.begin(), order.end(),
              [&](int x, int y) { return rank[T.vertexClass(t, x)] < rank[T.vertexClass(t, y)]; });
    for (int i = 0; i + 1 < 4; ++i)
      if (rank[T.vertexClass(t, order[i])] == rank[T.vertexClass(t, order[i + 1])])
        fail(ErrorKind::NoTotalOrder, "a tetrahedron has two vertices in one class");
    b.push_back(Branching::fromOrder(order));
  }
  return b;
}

template <class S>
Decoration<S> coboundaryDecoration(const Triangulation& T, const std::vector<Branching>& b,
                                   const std::vector<Borel<S>>& u) {
  Decoration<S> D;
  D.b = b;
  D.sign = orientationSigns(T, b);
  D.z = coboundary(T, b, u);
  D.c = findCharge(T);
  return D;
}

Borel<Complex> randomBorel(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Complex t;
  do t = {g(rng), g(rng)};
  while (std::abs(t) < 0.3);
  return {t, {g(rng), g(rng)}};
}

Borel<GaussianRational> randomExactBorel(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> part(-4, 4), den(1, 3);
  auto draw = [&] { return gaussian(part(rng), part(rng), den(rng)); };
  GaussianRational t;
  do t = draw();
  while (isZero(t));
  return {t, draw()};
}

Decoration<Complex> randomDecoration(const Triangulation& T, const std::vector<Branching>& b, std::mt19937_64& rng) {
  std::vector<Borel<Complex>> u;
  for (int w = 0; w < T.numVertices(); ++w) u.push_back(randomBorel(rng));
  return coboundaryDecoration(T, b, u);
}

Decoration<GaussianRational> randomExactDecoration(const Triangulation& T, const std::vector<Branching>& b,
                                                   std::mt19937_64& rng) {
  // redraw until every edge value is full
  for (;;) {
    std::vector<Borel<GaussianRational>> u;
    for (int w = 0; w < T.numVertices(); ++w) u.push_back(randomExactBorel(rng));
    auto D = coboundaryDecoration(T, b, u);
    if (std::none_of(D.z.begin(), D.z.end(), [](const auto& z) { return isZero(z.x); })) return D;
  }
}

Decoration<Complex> lensDecoration(int p, int q, int r, Complex x, std::mt19937_64& rng, int m) {
  Triangulation T = lensSpace(p, q, m);
  LensCover C(p, q, m);
  Borel<Complex> h{std::polar(1.0, 2 * std::numbers::pi * r / p), x};
  std::map<int, Borel<Complex>> base;
  for (int type = 0; type < 2; ++type)
    for (int i = 0; i < m; ++i) base[C.label(type, i)] = randomBorel(rng);
  auto u = [&](int lab) {
    auto [f, k] = C.fundamental(lab);
    Borel<Complex> v = base.at(f);
    for (int i = 0; i < k; ++i) v = h * v;
    return v;
  };
  Decoration<Complex> D;
  D.z.assign(T.numEdges(), {});
  std::vector<bool> set(T.numEdges(), false);
  for (int t = 0; t < T.size(); ++t) {
    // a_i < a_i+1 < b_j < b_j+1: both cores are oriented around their circle
    const Perm4 order{0, 1, 2, 3};
    D.b.push_back(Branching::fromOrder(order));
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) {
        int s = T.edgeClass(t, edgeIndex(order[i], order[j]));
        if (set[s]) continue;
        D.z[s] = inv(u(C.tets[t][order[i]])) * u(C.tets[t][order[j]]);
        set[s] = true;
      }
  }
  D.sign = orientationSigns(T, D.b);
  D.c = findCharge(T);
  return D;
}

std::vector<IdealTetrahedron<Complex>> figureEightIdeal(const Triangulation& T) {
  std::vector<IdealTetrahedron<Complex>> out;
  const Complex w = std::polar(1.0, std::numbers::pi / 3);
  for (int t = 0; t < T.size(); ++t) {
    IdealTetrahedron<Complex> d;
    d.b = Branching::fromOrder(T.orientation(t) > 0 ? Perm4{0, 1, 2, 3} : Perm4{1, 0, 2, 3});
    d.sign = 1;
    d.w = completeTriple(w);
    out.push_back(d);
  }
  return out;
}

template <class S>
EquivalenceWitness buildWitness(const Triangulation& T0, const Decoration<S>& D0, const std::vector<MoveKind>& kinds) {
  EquivalenceWitness w;
  Triangulation T = T0;
  Decoration<S> D = D0;
  for (MoveKind k : kinds) {
    std::vector<MoveSpec> candidates;
    switch (k) {
      case MoveKind::TwoThree: candidates = admissibleSites23(T, D); break;
      case MoveKind::Bubble:
        for (int t = 0; t < T.size(); ++t)
          for (int f = 0; f < 4; ++f) candidates.push_back({k, t, f, -1, -1});
        break;
      case MoveKind::ThreeTwo:
        for (int s = 0; s < T.numEdges(); ++s) candidates.push_back({k, -1, -1, s, -1});
        break;
      case MoveKind::Unbubble:
        for (int v = 0; v < T.numVertices(); ++v) candidates.push_back({k, -1, -1, -1, v});
        break;
    }
    bool done = false;
    for (const auto& m : candidates) {
      try {
        auto r = applyMove(T, D, m);
        if ((k == MoveKind::TwoThree || k == MoveKind::ThreeTwo) && !r.move.admissible) continue;
        // e.g. a 2-3 move joining two apices in one vertex class leaves a loop edge
        if (!validateDTriangulation(r.T, r.D).ok()) continue;
        T = std::move(r.T);
        D = std::move(r.D);
        w.chain.push_back(m);
        done = true;
        break;
      } catch (const Error&) {
      }
    }
    if (!done) fail(ErrorKind::InvalidSite, std::string("no site for a ") + moveName(k) + " move");
  }
  return w;
}

std::vector<std::string> exampleNames() {
  return {"double_tetrahedron", "double_tetrahedron_exact", "simplex_boundary", "simplex_boundary_23",
          "double_tetrahedron_bubble", "lens_4_1", "lens_7_1", "figure_eight"};
}

Document example(const std::string& name) {
  Document d;
  d.name = name;
  std::mt19937_64 rng(20240611);
  const std::vector<MoveKind> chain{MoveKind::TwoThree, MoveKind::Bubble, MoveKind::TwoThree, MoveKind::ThreeTwo};
  if (name == "double_tetrahedron" || name == "double_tetrahedron_bubble") {
    d.T = doubleTetrahedron();
    d.D = randomDecoration(d.T, branchingFromVertexRanks(d.T, {0, 1, 2, 3}), rng);
    if (name == "double_tetrahedron_bubble") {
      auto w = buildWitness(d.T, *d.D, {MoveKind::Bubble});
      auto r = applyMove(d.T, *d.D, w.chain[0]);
      d.T = r.T;
      d.D = r.D;
    }
  } else if (name == "double_tetrahedron_exact") {
    d.T = doubleTetrahedron();
    d.exact = randomExactDecoration(d.T, branchingFromVertexRanks(d.T, {0, 1, 2, 3}), rng);
    d.D = toComplex(*d.exact);
  } else if (name == "simplex_boundary" || name == "simplex_boundary_23") {
    d.T = boundaryOf4Simplex();
    d.D = randomDecoration(d.T, branchingFromVertexRanks(d.T, {0, 1, 2, 3, 4}), rng);
    if (name == "simplex_boundary") {
      d.witness = buildWitness(d.T, *d.D, chain);
    } else {
      auto w = buildWitness(d.T, *d.D, {MoveKind::TwoThree});
      auto r = applyMove(d.T, *d.D, w.chain[0]);
      d.T = r.T;
      d.D = r.D;
    }
  } else if (name == "lens_4_1" || name == "lens_7_1") {
    int p = name == "lens_4_1" ? 4 : 7;
    d.T = lensSpace(p, 1);
    d.D = lensDecoration(p, 1, 1, {0.7, -0.4}, rng);
    // every face of this cover has both apices in one vertex class, so the chain starts with a bubble
    if (p == 7)
      d.witness = buildWitness(d.T, *d.D, {MoveKind::Bubble, MoveKind::TwoThree, MoveKind::TwoThree, MoveKind::ThreeTwo});
  } else if (name == "figure_eight") {
    d.T = figureEightPattern();
    d.ideal = figureEightIdeal(d.T);
    d.flattening = solveFlattening(d.T, *d.ideal).pq;
  } else {
    fail(ErrorKind::InvalidArgument, "unknown example " + name);
  }
  return d;
}

template Decoration<Complex> coboundaryDecoration(const Triangulation&, const std::vector<Branching>&,
                                                  const std::vector<Borel<Complex>>&);
template Decoration<GaussianRational> coboundaryDecoration(const Triangulation&, const std::vector<Branching>&,
                                                           const std::vector<Borel<GaussianRational>>&);
template EquivalenceWitness buildWitness(const Triangulation&, const Decoration<Complex>&, const std::vector<MoveKind>&);
template EquivalenceWitness buildWitness(const Triangulation&, const Decoration<GaussianRational>&,
                                         const std::vector<MoveKind>&);

}  // namespace qhi
