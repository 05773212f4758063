#include "doctest.h"

#include <random>
#include <set>

#include "qhi/errors.hpp"
#include "qhi/examples.hpp"

using namespace qhi;

namespace {

Borel<Complex> parabolic(Complex x) { return {1.0, x}; }

// identity branchings on the double tetrahedron with parabolic vertex values u
Decoration<Complex> parabolicDouble(const Triangulation& T, const std::array<Complex, 4>& u) {
  std::vector<Borel<Complex>> vals(T.numVertices());
  for (int v = 0; v < 4; ++v) vals[T.vertexClass(0, v)] = parabolic(u[v]);
  std::vector<int> rank(T.numVertices());
  for (int v = 0; v < 4; ++v) rank[T.vertexClass(0, v)] = v;
  return coboundaryDecoration(T, branchingFromVertexRanks(T, rank), vals);
}

}  // namespace

TEST_CASE("branchings of one tetrahedron are the 24 vertex orders") {
  int count = 0;
  std::set<Perm4> orders;
  for (int mask = 0; mask < 64; ++mask) {
    std::array<bool, 6> low{};
    for (int e = 0; e < 6; ++e) low[e] = (mask >> e) & 1;
    try {
      Branching b = checkBranching(low);
      ++count;
      orders.insert(b.order);
      for (int e = 0; e < 6; ++e) CHECK((b.direction(e) > 0) == low[e]);
    } catch (const Error& err) {
      CHECK(err.kind() == ErrorKind::CoherentFace);
    }
  }
  CHECK(count == 24);
  CHECK(orders.size() == 24);
}

TEST_CASE("all edges low to high give the identity order") {
  std::array<bool, 6> low;
  low.fill(true);
  CHECK(checkBranching(low).order == Perm4{0, 1, 2, 3});
}

TEST_CASE("a directed 3-cycle on a face is coherent") {
  std::array<bool, 6> low;
  low.fill(true);
  low[edgeIndex(0, 2)] = false;  // 0->1->2->0
  try {
    checkBranching(low);
    FAIL("expected CoherentFace");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::CoherentFace);
  }
}

TEST_CASE("parabolic cocycle condition is additive") {
  Triangulation T = doubleTetrahedron();
  auto D = parabolicDouble(T, {0.0, 1.0, Complex(1, 1), Complex(0, 2)});
  // face 012 of tet 0: x(01) = 1, x(12) = i, x(02) = 1 + i
  CHECK(D.z[T.edgeClass(0, edgeIndex(0, 1))].x == Complex(1, 0));
  CHECK(D.z[T.edgeClass(0, edgeIndex(1, 2))].x == Complex(0, 1));
  CHECK(D.z[T.edgeClass(0, edgeIndex(0, 2))].x == Complex(1, 1));
  CHECK(cocycleCheck(T, D.b, D.z));
  D.z[T.edgeClass(0, edgeIndex(0, 2))].x = 2.0;
  CHECK_FALSE(cocycleCheck(T, D.b, D.z));
}

TEST_CASE("random coboundaries are cocycles") {
  std::mt19937_64 rng(7);
  Triangulation T = boundaryOf4Simplex();
  for (int i = 0; i < 20; ++i) {
    auto D = randomDecoration(T, branchingFromVertexRanks(T, {0, 1, 2, 3, 4}), rng);
    CHECK(cocycleCheck(T, D.b, D.z));
  }
  auto E = randomExactDecoration(T, branchingFromVertexRanks(T, {4, 2, 0, 1, 3}), rng);
  CHECK(cocycleCheck(T, E.b, E.z));
}

TEST_CASE("S4 action") {
  std::mt19937_64 rng(11);
  DecoratedTetrahedron<Complex> d;
  d.b = Branching::fromOrder({2, 0, 3, 1});
  for (auto& z : d.z) z = randomBorel(rng);
  d.c = {1, 0, 0, 0, 0, 1};

  SUBCASE("identity") {
    auto r = s4Act(identityPerm(), d);
    CHECK(r.b == d.b);
    CHECK(r.sign == d.sign);
    for (int e = 0; e < 6; ++e) CHECK(nearlyEqual(r.z[e], d.z[e]));
  }
  SUBCASE("transposition inverts the swapped edge") {
    auto r = s4Act({1, 0, 2, 3}, d);
    CHECK(r.sign == -d.sign);
    int e = d.edgeAt(0, 1);
    CHECK(nearlyEqual(r.z[e].t, 1.0 / d.z[e].t));
    CHECK(nearlyEqual(r.z[e].x, -d.z[e].x));
    for (int f = 0; f < 6; ++f)
      if (f != e) CHECK(nearlyEqual(r.z[f], d.z[f]));
    CHECK(r.c == d.c);
  }
  SUBCASE("composition law") {
    const auto& perms = allPerms();
    std::uniform_int_distribution<size_t> pick(0, perms.size() - 1);
    for (int i = 0; i < 20; ++i) {
      const Perm4& s = perms[pick(rng)];
      const Perm4& t = perms[pick(rng)];
      auto a = s4Act(s, s4Act(t, d));
      auto b = s4Act(compose(s, t), d);
      CHECK(a.b == b.b);
      CHECK(a.sign == b.sign);
      for (int e = 0; e < 6; ++e) CHECK(nearlyEqual(a.z[e], b.z[e]));
    }
  }
}

TEST_CASE("per-tetrahedron charge rules") {
  CHECK(chargeValidOnTet({1, 0, 0, 0, 0, 1}));
  CHECK(chargeValidOnTet({2, -1, 0, 0, -1, 2}));
  CHECK_FALSE(chargeValidOnTet({1, 0, 0, 0, 0, 0}));
  CHECK_FALSE(chargeValidOnTet({1, 1, 0, 0, 1, 1}));
}

TEST_CASE("edge charge sums are 2 off H and 0 on H") {
  Triangulation T = boundaryOf4Simplex();
  auto c = findCharge(T);
  auto rep = chargeCheck(T, c);
  CHECK(rep.ok());
  for (int s = 0; s < T.numEdges(); ++s) CHECK(rep.edgeSums[s] == (T.inHamiltonian(s) ? 0 : 2));
  // moving one unit between pairs of one tet breaks two edge sums
  std::swap(c[0][0], c[0][1]);
  std::swap(c[0][5], c[0][4]);
  if (c[0][0] != c[0][1]) CHECK_FALSE(chargeCheck(T, c).ok());
}

TEST_CASE("charge lattice solutions are valid") {
  for (auto T : {doubleTetrahedron(), boundaryOf4Simplex(), lensSpace(4, 1)}) {
    auto L = chargeLattice(T);
    auto c = chargesFromPairs(L.particular);
    for (int t = 0; t < T.size(); ++t) CHECK(chargeValidOnTet(c[t]));
    auto rep = chargeCheck(T, c);
    CHECK(rep.badEdges.empty());
    CHECK(chargeCheck(T, findCharge(T)).ok());
    CHECK(pairsFromCharges(c) == L.particular);
  }
}

TEST_CASE("validation accepts the bundled decorations and flags broken ones") {
  for (const auto& name : exampleNames()) {
    Document d = example(name);
    if (!d.D) continue;
    auto rep = validateDTriangulation(d.T, *d.D);
    CHECK_MESSAGE(rep.ok(), name);
  }
  Document d = example("double_tetrahedron");
  SUBCASE("non-full edge") {
    auto D = *d.D;
    D.z[0].x = 0.0;
    auto rep = validateDTriangulation(d.T, D);
    CHECK_FALSE(rep.ok());
    CHECK_FALSE(rep.full);
  }
  SUBCASE("sign against the branching orientation") {
    auto D = *d.D;
    D.sign[1] = -D.sign[1];
    auto rep = validateDTriangulation(d.T, D);
    CHECK_FALSE(rep.item[4]);
  }
  SUBCASE("broken charge") {
    auto D = *d.D;
    D.c[0][0] += 1;
    CHECK_FALSE(validateDTriangulation(d.T, D).item[3]);
  }
  SUBCASE("exact data validates") {
    Document e = example("double_tetrahedron_exact");
    CHECK(validateDTriangulation(e.T, *e.exact).ok());
  }
}

TEST_CASE("signs follow the branching parity") {
  Triangulation T = doubleTetrahedron();
  auto b = branchingFromVertexRanks(T, {0, 1, 2, 3});
  auto s = orientationSigns(T, b);
  CHECK(s[0] == -s[1]);
  Branching odd = Branching::fromOrder({1, 0, 2, 3});
  CHECK(orientationSign(T, 0, odd) == -orientationSign(T, 0, b[0]));
}
