#include "doctest.h"

#include <random>

#include "qhi/errors.hpp"
#include "qhi/examples.hpp"

using namespace qhi;

namespace {

// the same decorated triangulation with tetrahedra renumbered
template <class S>
std::pair<Triangulation, Decoration<S>> relabelled(const Triangulation& T, const Decoration<S>& D,
                                                   const std::vector<int>& perm) {
  Triangulation R = relabelTetrahedra(T, perm);
  Decoration<S> E;
  E.b.resize(T.size());
  E.sign.resize(T.size());
  E.c.resize(T.size());
  E.z.resize(R.numEdges());
  for (int t = 0; t < T.size(); ++t) {
    E.b[perm[t]] = D.b[t];
    E.sign[perm[t]] = D.sign[t];
    E.c[perm[t]] = D.c[t];
    for (int e = 0; e < 6; ++e) E.z[R.edgeClass(perm[t], e)] = D.z[T.edgeClass(t, e)];
  }
  return {R, E};
}

}  // namespace

TEST_CASE("class of a triangulation has one term per tetrahedron") {
  for (const char* name : {"double_tetrahedron", "simplex_boundary", "lens_4_1"}) {
    Document d = example(name);
    auto s = classOf(d.T, *d.D);
    CHECK(s.terms.size() == static_cast<size_t>(d.T.size()));
    for (const auto& t : s.terms) CHECK(t.coef == 1);
    CHECK(s.totalCoefficient() == d.T.size());
  }
}

TEST_CASE("class of a non-decoration is refused") {
  Document d = example("double_tetrahedron");
  auto D = *d.D;
  D.c[0][0] += 1;
  try {
    classOf(d.T, D);
    FAIL("expected InvalidDecoration");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidDecoration);
  }
}

TEST_CASE("relabelling tetrahedra leaves the class alone") {
  Document d = example("simplex_boundary");
  auto [R, E] = relabelled(d.T, *d.D, {2, 4, 0, 1, 3});
  CHECK(validateDTriangulation(R, E).ok());
  CHECK(equivalentSums(classOf(d.T, *d.D), classOf(R, E)));
  std::mt19937_64 rng(5);
  auto exact = randomExactDecoration(d.T, d.D->b, rng);
  auto [R2, E2] = relabelled(d.T, exact, {4, 3, 2, 1, 0});
  CHECK(equivalentSums(classOf(d.T, exact), classOf(R2, E2)));
}

TEST_CASE("a 2-3 move changes the class by one five-term relation") {
  Document d = example("simplex_boundary");
  auto before = classOf(d.T, *d.D);
  for (const auto& m : admissibleSites23(d.T, *d.D)) {
    auto r = transit23(d.T, *d.D, m.tet, m.face);
    auto rel = relationFromTransit(d.T, *d.D, r);
    CHECK(rel.lhs.terms.size() == 2);
    CHECK(rel.rhs.terms.size() == 3);
    auto after = classOf(r.T, r.D);
    CHECK(differsByRelation(before, after, rel));
    // not by the opposite relation
    FiveTermRelation<DecoratedTetrahedron<Complex>> flipped{rel.rhs, rel.lhs, rel.provenance};
    CHECK_FALSE(differsByRelation(before, after, flipped));
    // the 3-2 move back gives the same relation
    auto back = transit32(r.T, r.D, r.move.edge);
    auto rel2 = relationFromTransit(r.T, r.D, back);
    // the 3-2 move may relabel local vertices, so compare modulo the S4 action
    CHECK(normalizeS4(rel.element() - rel2.element()).terms.empty());
    CHECK(differsByRelation(after, classOf(back.T, back.D), rel2));
  }
}

TEST_CASE("relations from exact transits") {
  std::mt19937_64 rng(17);
  Triangulation T = boundaryOf4Simplex();
  auto D = randomExactDecoration(T, branchingFromVertexRanks(T, {3, 1, 4, 0, 2}), rng);
  auto before = classOf(T, D);
  for (const auto& m : admissibleSites23(T, D)) {
    auto r = transit23(T, D, m.tet, m.face);
    CHECK(differsByRelation(before, classOf(r.T, r.D), relationFromTransit(T, D, r)));
  }
}

TEST_CASE("ideal relations follow the idealized moves") {
  Document d = example("simplex_boundary");
  auto tets = idealizeTriangulation(d.T, *d.D);
  auto before = classOf(tets);
  for (const auto& m : admissibleSites23(d.T, *d.D)) {
    auto r = transitIdeal23(d.T, tets, m.tet, m.face);
    auto rel = relationFromTransit(tets, r);
    CHECK(differsByRelation(before, classOf(r.tets), rel, 1e-10));
  }
}

TEST_CASE("bubble moves carry no five-term relation") {
  Document d = example("double_tetrahedron");
  auto w = buildWitness(d.T, *d.D, {MoveKind::Bubble});
  auto r = applyMove(d.T, *d.D, w.chain[0]);
  try {
    relationFromTransit(d.T, *d.D, r);
    FAIL("expected InvalidArgument");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidArgument);
  }
}

TEST_CASE("S4 normalization") {
  std::mt19937_64 rng(23);
  const auto& perms = allPerms();
  std::uniform_int_distribution<size_t> pick(0, perms.size() - 1);
  std::uniform_int_distribution<int> coef(-3, 3);
  DSum<Complex> s;
  for (int i = 0; i < 50; ++i) {
    DecoratedTetrahedron<Complex> d;
    d.b = Branching::fromOrder(perms[pick(rng)]);
    for (auto& z : d.z) z = randomBorel(rng);
    d.c = {0, 1, 0, 0, 1, 0};
    s.terms.push_back({coef(rng), d});
  }
  auto n = normalizeS4(s);
  for (const auto& t : n.terms) {
    CHECK(t.tet.b == Branching::identity());
    CHECK(t.coef != 0);
  }
  auto nn = normalizeS4(n);
  REQUIRE(nn.terms.size() == n.terms.size());
  CHECK(equivalentSums(n, nn));
  for (size_t i = 0; i < n.terms.size(); ++i) {
    CHECK(nn.terms[i].coef == n.terms[i].coef);
    CHECK(sameTetrahedron(nn.terms[i].tet, n.terms[i].tet, 0.0));
  }

  SUBCASE("odd relabelling with the same sign cancels") {
    const auto& d = s.terms[0].tet;
    auto image = s4Act({1, 0, 2, 3}, d);
    image.sign = d.sign;  // relabelled data only, no sign change
    DSum<Complex> pair;
    pair.terms.push_back({2, d});
    pair.terms.push_back({2, image});
    CHECK(normalizeS4(pair).terms.empty());
  }
  SUBCASE("the action is trivial on classes") {
    const auto& d = s.terms[1].tet;
    for (const Perm4& p : perms) {
      DSum<Complex> diff;
      diff.terms.push_back({1, d});
      diff.terms.push_back({-1, s4Act(p, d)});
      CHECK(normalizeS4(diff).terms.empty());
    }
  }
  SUBCASE("even images add up") {
    const auto& d = s.terms[0].tet;
    DSum<Complex> pair;
    pair.terms.push_back({1, d});
    pair.terms.push_back({1, s4Act({1, 2, 0, 3}, d)});
    auto r = normalizeS4(pair);
    REQUIRE(r.terms.size() == 1);
    CHECK(std::abs(r.terms[0].coef) == 2);
  }
  SUBCASE("canonical permutation") {
    for (const auto& t : s.terms) {
      auto c = s4Act(canonicalPermutation(t.tet), t.tet);
      CHECK(c.b == Branching::identity());
    }
  }
}

TEST_CASE("collect merges and drops") {
  Document d = example("double_tetrahedron");
  auto s = classOf(d.T, *d.D);
  auto twice = s + s;
  auto c = collect(twice);
  CHECK(c.terms.size() == s.terms.size());
  CHECK(collect(s - s).terms.empty());
  CHECK(equivalentSums(twice, s + s));
  CHECK_FALSE(equivalentSums(twice, s));
}

TEST_CASE("witness replay and verification") {
  for (const char* name : {"simplex_boundary", "lens_7_1"}) {
    Document d = example(name);
    REQUIRE(d.witness);
    CHECK(d.witness->chain.size() >= 3);
    auto r = replay(d.T, *d.D, *d.witness);
    CHECK(r.records.size() == d.witness->chain.size());
    CHECK(r.classes.size() == d.witness->chain.size() + 1);
    CHECK(validateDTriangulation(r.T, r.D).ok());
    CHECK(verifyWitness(d.T, *d.D, r.T, r.D, *d.witness));
    // every 2-3 or 3-2 step is one relation
    size_t k = 0;
    for (size_t i = 0; i < r.records.size(); ++i) {
      MoveKind kind = r.records[i].kind;
      if (kind != MoveKind::TwoThree && kind != MoveKind::ThreeTwo) continue;
      REQUIRE(k < r.relations.size());
      CHECK(differsByRelation(r.classes[i], r.classes[i + 1], r.relations[k++]));
    }
    CHECK(k == r.relations.size());
    // a truncated chain does not reach the target
    EquivalenceWitness shorter{{d.witness->chain.begin(), d.witness->chain.end() - 1}};
    CHECK_FALSE(verifyWitness(d.T, *d.D, r.T, r.D, shorter));
  }
}
