#include "doctest.h"

#include <numbers>
#include <random>

#include "qhi/errors.hpp"
#include "qhi/examples.hpp"

using namespace qhi;

namespace {

const Complex I(0, 1);

// identity-branched tetrahedron with parabolic values x(ij) = u_j - u_i
template <class S>
DecoratedTetrahedron<S> parabolicTet(const std::array<S, 4>& u) {
  DecoratedTetrahedron<S> d;
  for (int e = 0; e < 6; ++e) d.z[e] = {S(1), u[kEdgeVertex[e][1]] - u[kEdgeVertex[e][0]]};
  d.c = {1, 0, 0, 0, 0, 1};
  return d;
}

}  // namespace

TEST_CASE("modular triple of i") {
  auto w = completeTriple(I);
  CHECK(nearlyEqual(w.w0, I));
  CHECK(nearlyEqual(w.w1, Complex(0.5, 0.5)));
  CHECK(nearlyEqual(w.w2, Complex(1, 1)));
  CHECK(nearlyEqual(w.w0 * w.w1 * w.w2, -1.0));

  auto e = completeTriple(gaussian(0, 1));
  CHECK((e.w1 == gaussian(1, 1, 2)));
  CHECK((e.w2 == gaussian(1, 1)));
  CHECK((e.w0 * e.w1 * e.w2 == gaussian(-1)));
  CHECK((e.w0 * e.w1 - e.w1 == gaussian(-1)));
}

TEST_CASE("regular ideal tetrahedron") {
  const Complex r = std::polar(1.0, std::numbers::pi / 3);
  auto w = completeTriple(r);
  CHECK(std::abs(w.w1 - r) < 1e-15);
  CHECK(std::abs(w.w2 - r) < 1e-15);
}

TEST_CASE("degenerate moduli") {
  for (Complex w : {Complex(0), Complex(1)}) {
    try {
      completeTriple(w);
      FAIL("expected DegenerateModulus");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::DegenerateModulus);
    }
  }
}

TEST_CASE("idealization of a parabolic coboundary") {
  auto d = parabolicTet<GaussianRational>({gaussian(0), gaussian(1), gaussian(1, 1), gaussian(0, 2)});
  auto p = pValues(d);
  CHECK((p[0] == gaussian(-1, 1)));
  CHECK((p[1] == gaussian(-2)));
  CHECK((p[2] == gaussian(3, -1)));
  CHECK((p[0] + p[1] + p[2] == gaussian(0)));
  auto t = idealize(d);
  CHECK((t.w.w0 == gaussian(3, 1, 5)));
  CHECK((t.w.w0 == crossRatio(gaussian(0), gaussian(1), gaussian(1, 1), gaussian(0, 2))));
  CHECK((t.w.w1 == completeTriple(t.w.w0).w1));
}

TEST_CASE("idealization matches the cross-ratio for random vertices") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int i = 0; i < 200; ++i) {
    std::array<Complex, 4> u;
    for (auto& v : u) v = {g(rng), g(rng)};
    auto t = idealize(parabolicTet<Complex>(u));
    CHECK(std::abs(t.w.w0 - crossRatio(u[0], u[1], u[2], u[3])) < 1e-12 * std::max(1.0, std::abs(t.w.w0)));
    // projective point version agrees
    std::array<ProjectivePoint<Complex>, 4> P;
    for (int k = 0; k < 4; ++k) P[k] = {u[k], 1.0};
    CHECK(nearlyEqual(crossRatio(P), t.w.w0, 1e-12));
  }
}

TEST_CASE("moduli only depend on the projective class") {
  std::mt19937_64 rng(5);
  DecoratedTetrahedron<Complex> d;
  d.b = Branching::fromOrder({3, 1, 0, 2});
  for (auto& z : d.z) z = randomBorel(rng);
  auto w = idealize(d);
  for (Complex lambda : {Complex(2, 0), Complex(-0.3, 1.7), Complex(0, -5)}) {
    auto s = d;
    for (auto& z : s.z) z.x *= lambda;
    auto v = idealize(s);
    for (int i = 0; i < 3; ++i) CHECK(nearlyEqual(v.w[i], w.w[i], 1e-12));
  }
}

TEST_CASE("idealization commutes with the S4 action") {
  std::mt19937_64 rng(9);
  DecoratedTetrahedron<Complex> d;
  for (auto& z : d.z) z = randomBorel(rng);
  // make z a cocycle on this tetrahedron
  std::array<Borel<Complex>, 4> u;
  for (auto& v : u) v = randomBorel(rng);
  for (int e = 0; e < 6; ++e) d.z[e] = inverse(u[kEdgeVertex[e][0]]) * u[kEdgeVertex[e][1]];
  for (const Perm4& s : allPerms()) {
    auto a = idealize(s4Act(s, d));
    auto b = s4Act(s, idealize(d));
    CHECK(sameTetrahedron(a, b, 1e-10));
  }
}

TEST_CASE("non-full input is refused") {
  DecoratedTetrahedron<Complex> d;
  for (auto& z : d.z) z = {1.0, 1.0};
  d.z[2].x = 0.0;
  try {
    idealize(d);
    FAIL("expected NotFull");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotFull);
  }
}

TEST_CASE("edge products on bundled triangulations") {
  for (const auto& name : exampleNames()) {
    Document d = example(name);
    if (d.D) CHECK_MESSAGE(edgeProducts(d.T, idealizeTriangulation(d.T, *d.D)).ok(1e-10), name);
  }
  Document e = example("double_tetrahedron_exact");
  auto exact = idealizeTriangulation(e.T, *e.exact);
  CHECK(edgeProducts(e.T, exact).maxDeviation < 1e-15);
}

TEST_CASE("a perturbed cocycle breaks the edge products") {
  Document d = example("simplex_boundary");
  auto D = *d.D;
  D.z[3].x *= Complex(1.1, 0.2);
  CHECK_FALSE(edgeProducts(d.T, idealizeTriangulation(d.T, D)).ok(1e-6));
}

TEST_CASE("figure-eight flattening") {
  Triangulation T = figureEightPattern();
  auto tets = figureEightIdeal(T);
  CHECK(edgeProducts(T, tets).ok(1e-12));
  auto f = solveFlattening(T, tets);
  for (auto [p, q] : f.pq) {
    CHECK(std::abs(p) <= 2);
    CHECK(std::abs(q) <= 2);
  }
  for (Complex s : flatteningEdgeSums(T, tets, f.pq)) CHECK(std::abs(s) < 1e-12);
  // per-tet closure
  auto l = logParameters(tets[0].w.w0, f.pq[0][0], f.pq[0][1]);
  CHECK(std::abs(l[0] + l[1] + l[2]) == 0.0);
  // kernel shifts give other flattenings
  for (const auto& k : f.kernel) {
    auto pq = f.pq;
    for (size_t t = 0; t < pq.size(); ++t) {
      pq[t][0] += 2 * k[2 * t];
      pq[t][1] += 2 * k[2 * t + 1];
    }
    for (Complex s : flatteningEdgeSums(T, tets, pq)) CHECK(std::abs(s) < 1e-12);
  }
  // same answer twice
  CHECK(solveFlattening(T, tets).pq == f.pq);
}
