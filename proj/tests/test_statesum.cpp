#include "doctest.h"

#include <random>

#include "qhi/errors.hpp"
#include "qhi/examples.hpp"

using namespace qhi;

namespace {

double rel(Complex a, Complex b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

// closed ring of k four-leg tensors, neighbours sharing two labels
std::vector<std::vector<int>> ring(int k) {
  std::vector<std::vector<int>> legs;
  for (int i = 0; i < k; ++i)
    legs.push_back({2 * i, 2 * i + 1, (2 * i + 2) % (2 * k), (2 * i + 3) % (2 * k)});
  return legs;
}

// random closed network: 4k slots paired at random
std::vector<std::vector<int>> randomNetwork(int k, std::mt19937_64& rng) {
  std::vector<int> slots(4 * k);
  for (int i = 0; i < 4 * k; ++i) slots[i] = i / 2;
  std::shuffle(slots.begin(), slots.end(), rng);
  std::vector<std::vector<int>> legs(k);
  for (int i = 0; i < 4 * k; ++i) legs[i / 4].push_back(slots[i]);
  return legs;
}

// every label assignment summed directly
Complex bruteForce(const std::vector<Tensor>& ts, int labels, int N) {
  std::vector<int> val(labels, 0);
  Complex total = 0;
  for (;;) {
    Complex p = 1;
    for (const auto& t : ts) {
      size_t idx = 0;
      for (int l : t.legs) idx = idx * N + val[l];
      p *= t.data[idx];
    }
    total += p;
    int i = 0;
    while (i < labels && ++val[i] == N) val[i++] = 0;
    if (i == labels) break;
  }
  return total;
}

Decoration<Complex> conjugated(const Decoration<Complex>& D) {
  Decoration<Complex> E = D;
  for (auto& s : E.sign) s = -s;
  for (auto& z : E.z) z = {std::conj(z.t), std::conj(z.x)};
  return E;
}

}  // namespace

TEST_CASE("plan for one tetrahedron with self pairings") {
  Triangulation T = oneTetrahedron();
  auto legs = networkLegs(T, {Branching::identity()});
  REQUIRE(legs.size() == 1);
  auto plan = planContraction(legs, 3);
  CHECK(plan.steps.empty());
  CHECK(plan.cost == plan.naiveCost);
  // the trace agrees with a direct diagonal sum
  Tensor t;
  t.legs = legs[0];
  for (int i = 0; i < 81; ++i) t.data.push_back({std::sin(i + 1.0), std::cos(3.0 * i)});
  CHECK(std::abs(contract({t}, plan).value() - bruteForce({t}, 2, 3)) < 1e-12);
}

TEST_CASE("ring plans grow linearly") {
  const int N = 3;
  double last = 0;
  for (int k : {4, 8, 16}) {
    auto plan = planContraction(ring(k), N);
    CHECK(plan.cost <= plan.naiveCost);
    CHECK(plan.largest <= std::pow(N, 4));
    if (last > 0) CHECK(plan.cost < 3 * last);
    last = plan.cost;
  }
}

TEST_CASE("planned contraction equals brute force on random networks") {
  std::mt19937_64 rng(41);
  std::normal_distribution<double> g;
  const int N = 2;
  for (int trial = 0; trial < 100; ++trial) {
    int k = 1 + trial % 5;
    auto legs = randomNetwork(k, rng);
    for (auto method : {PlanMethod::Auto, PlanMethod::Greedy}) {
      auto plan = planContraction(legs, N, 1e8, method);
      CHECK(plan.cost <= plan.naiveCost);
      std::vector<Tensor> ts;
      for (const auto& l : legs) {
        Tensor t;
        t.legs = l;
        t.data.resize(16);
        for (auto& v : t.data) v = {g(rng), g(rng)};
        ts.push_back(t);
      }
      Complex want = bruteForce(ts, 2 * k, N);
      Complex got = contract(ts, plan).value();
      CHECK(std::abs(got - want) < 1e-10 * std::max(1.0, std::abs(want)));
    }
  }
}

TEST_CASE("planner refuses oversize intermediates") {
  try {
    planContraction(ring(6), 3, 10.0);
    FAIL("expected BudgetExceeded");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BudgetExceeded);
  }
  CHECK_THROWS_AS(planContraction({{0, 1, 2, 3}}, 3), Error);  // labels used once
}

TEST_CASE("scaled complex arithmetic") {
  auto a = ScaledComplex::from({3, 4});
  CHECK(std::abs(a.value() - Complex(3, 4)) < 1e-14);
  CHECK(std::abs(a.logAbs() - std::log(5.0)) < 1e-14);
  auto big = a.pow(1000);
  CHECK(std::abs(big.logAbs() - 1000 * std::log(5.0)) < 1e-9);
  CHECK(relativeDifference(big, big) == 0.0);
  CHECK(relativeDifference((big * a) / a, big) < 1e-12);
  CHECK(ScaledComplex::from(0).logAbs() == -std::numeric_limits<double>::infinity());
}

TEST_CASE("planned and naive state sums agree") {
  auto R = RootSystem::make(3);
  for (const char* name : {"double_tetrahedron", "double_tetrahedron_exact", "simplex_boundary",
                           "double_tetrahedron_bubble"}) {
    Document d = example(name);
    auto r = evaluate(d.T, *d.D, R);
    auto naive = evaluateNaive(d.T, *d.D, R);
    CHECK_MESSAGE(relativeDifference(r.psi, naive) < 1e-10, name);
    CHECK(r.plan.cost <= r.plan.naiveCost);
    CHECK(relativeDifference(r.h, r.psi * r.weight) < 1e-14);
    CHECK(relativeDifference(r.k, r.h.pow(3)) < 1e-14);
    CHECK(r.vertices == d.T.numVertices());
  }
}

TEST_CASE("the dense route gives the same sum") {
  Document d = example("simplex_boundary");
  auto R = RootSystem::make(3);
  StateSumOptions dense;
  dense.route = TensorRoute::Dense;
  CHECK(relativeDifference(evaluate(d.T, *d.D, R).k, evaluate(d.T, *d.D, R, dense).k) < 1e-8);
}

TEST_CASE("weights") {
  Document d = example("simplex_boundary");
  auto R = RootSystem::make(3);
  auto w = stateWeight(d.T, *d.D, R);
  Complex prod = std::pow(3.0, -d.T.numVertices());
  for (int s = 0; s < d.T.numEdges(); ++s)
    if (!d.T.inHamiltonian(s)) prod *= std::exp(2.0 / 3.0 * R.log(d.D->z[s].x));
  CHECK(rel(w.value(), prod) < 1e-13);
}

TEST_CASE("state sum is unchanged along the simplex witness") {
  Document d = example("simplex_boundary");
  auto R = RootSystem::make(3);
  auto k0 = evaluate(d.T, *d.D, R);
  Triangulation T = d.T;
  auto D = *d.D;
  for (const auto& m : d.witness->chain) {
    auto r = applyMove(T, D, m);
    T = r.T;
    D = r.D;
    auto k = evaluate(T, D, R);
    CHECK(relativeDifference(k.k, k0.k) < 1e-6);
    CHECK(std::abs(std::pow(k.h.value() / k0.h.value(), 3) - 1.0) < 1e-8);
  }
}

TEST_CASE("projective rescaling and conjugation") {
  std::mt19937_64 rng(43);
  std::normal_distribution<double> g;
  Document d = example("simplex_boundary");
  auto R = RootSystem::make(3);
  auto base = evaluate(d.T, *d.D, R);
  for (int i = 0; i < 3; ++i) {
    Complex lambda(g(rng), g(rng));
    auto D = *d.D;
    for (auto& z : D.z) z.x *= lambda;
    CHECK(relativeDifference(evaluate(d.T, D, R).k, base.k) < 1e-6);
  }
  Triangulation mirror = d.T.withOrientation(-d.T.orientation0());
  auto E = conjugated(*d.D);
  REQUIRE(validateDTriangulation(mirror, E).ok());
  auto c = evaluate(mirror, E, R);
  CHECK(relativeDifference(c.k, base.k.conj()) < 1e-8);
}

TEST_CASE("augmented sum") {
  auto R = RootSystem::make(3);
  for (const char* name : {"double_tetrahedron", "simplex_boundary", "double_tetrahedron_bubble"}) {
    Document d = example(name);
    auto aug = augment(d.T, *d.D);
    REQUIRE(aug.size() == static_cast<size_t>(d.T.size()));
    ScaledComplex phi = ScaledComplex::from(1), omega = ScaledComplex::from(1);
    for (const auto& a : aug) {
      phi = phi * phiFactor(a, 3);
      omega = omega * omegaFactor(a, R);
    }
    CHECK(std::abs(phi.logAbs() + d.T.numVertices() * std::log(3.0)) < 1e-12);
    CHECK(std::abs(phi.arg()) < 1e-12);
    auto w = stateWeight(d.T, *d.D, R);
    CHECK(relativeDifference(phi * omega, w) < 1e-12);
    auto h = evaluateAugmented(aug, R);
    auto k = evaluate(d.T, *d.D, R).k;
    CHECK_MESSAGE(relativeDifference(h.pow(3), k) < 1e-8, name);
  }
}

TEST_CASE("multiplicity mismatch") {
  Document d = example("simplex_boundary");
  auto aug = augment(d.T, *d.D);
  aug[0].v2[0] += 1;
  try {
    evaluateAugmented(aug, RootSystem::make(3));
    FAIL("expected MultiplicityMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MultiplicityMismatch);
  }
}

TEST_CASE("three-sphere and lens values") {
  auto R = RootSystem::make(3);
  // H = N^-2 on these spheres, and 1/N on L(7,1) with its core circles
  for (const char* name : {"double_tetrahedron", "simplex_boundary"}) {
    Document d = example(name);
    CHECK(rel(evaluate(d.T, *d.D, R).k.value(), std::pow(3.0, -6)) < 1e-8);
  }
  Document lens = example("lens_7_1");
  CHECK(rel(evaluate(lens.T, *lens.D, R).k.value(), 1.0 / 27) < 1e-8);
}
