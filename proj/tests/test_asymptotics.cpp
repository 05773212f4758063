#include "doctest.h"

#include <numbers>
#include <random>

#include "qhi/asymptotics.hpp"
#include "qhi/errors.hpp"
#include "qhi/examples.hpp"

using namespace qhi;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<int> oddRange(int from, int count) {
  std::vector<int> Ns;
  for (int i = 0; i < count; ++i) Ns.push_back(from + 2 * i);
  return Ns;
}

bool close(Complex a, Complex b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("growth fit recovers a planted slope") {
  std::vector<GrowthSample> samples;
  for (int N = 3; N <= 15; N += 2) {
    GrowthSample s;
    s.N = N;
    s.logAbsK = 0.75 * N * N / (2 * kPi) - 1.25;
    s.logAbsPsi = 0.3 * N / (2 * kPi) + 2.0;
    samples.push_back(s);
  }
  auto fit = fitGrowth(samples);
  CHECK(std::abs(fit.slope - 0.75) < 1e-10);
  CHECK(std::abs(fit.intercept + 1.25) < 1e-9);
  CHECK(std::abs(fit.psiSlope - 0.3) < 1e-10);
  for (double r : fit.residuals) CHECK(std::abs(r) < 1e-9);
  CHECK(fit.nMin == 3);
  CHECK(fit.nMax == 15);
  CHECK_THROWS_AS(fitGrowth({samples[0]}), Error);
}

TEST_CASE("ansatz samples are blind to the phase lattice") {
  AnsatzParameters p{{0.4, -0.3}, {0.2, 0.15}, std::polar(1.7, 0.6)};
  auto q = canonicalBranch(p);
  for (int N : oddRange(3, 8)) {
    auto a = ansatzSample(p, N), b = ansatzSample(q, N);
    CHECK(relativeDifference(a, b) < 1e-9);
  }
  auto c = canonicalBranch(q);
  CHECK(close(c.R, q.R, 1e-14));
  CHECK(close(c.C, q.C, 1e-14));
  CHECK(q.R.real() >= 0);
  CHECK(q.R.real() < kPi * kPi / 16);
  CHECK(q.C.real() >= 0);
  CHECK(q.C.real() < kPi * kPi / 4);
  CHECK(std::abs(q.R.imag() - p.R.imag()) < 1e-14);
  auto n = branchNearest(p, p.R.real());
  CHECK(close(n.R, p.R, 1e-12));
}

TEST_CASE("synthetic ansatz recovery") {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int trial = 0; trial < 20; ++trial) {
    AnsatzParameters p{{u(rng), u(rng)}, {u(rng) * 0.3, u(rng) * 0.3}, std::polar(1 + u(rng), 2 * u(rng))};
    auto Ns = oddRange(3, 8);
    std::vector<ScaledComplex> k8;
    for (int N : Ns) k8.push_back(ansatzSample(p, N));
    auto fit = fitAnsatz(Ns, k8);
    auto want = canonicalBranch(p);
    CHECK(close(fit.fit.R, want.R, 1e-6));
    CHECK(close(fit.fit.C, want.C, 1e-6));
    CHECK(close(fit.fit.D, want.D, 1e-6));
    CHECK(fit.residual < 1e-8);
  }
}

TEST_CASE("ansatz fit input checks") {
  AnsatzParameters p{{0.1, 0}, {0.05, 0.01}, 1.0};
  std::vector<ScaledComplex> k8;
  for (int N : {3, 5, 7}) k8.push_back(ansatzSample(p, N));
  CHECK_THROWS_AS(fitAnsatz({3, 5, 7}, k8), Error);
  k8.push_back(ansatzSample(p, 11));
  CHECK_THROWS_AS(fitAnsatz({3, 5, 7, 11}, k8), Error);
}

TEST_CASE("phase continuation refuses wild data") {
  std::vector<ScaledComplex> k8;
  for (double ph : {0.0, 0.1, 0.2, 0.3, 3.0}) k8.push_back({std::polar(1.0, ph), 0});
  try {
    fitAnsatz(oddRange(3, 5), k8);
    FAIL("expected PhaseUnwrapFailure");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::PhaseUnwrapFailure);
  }
}

TEST_CASE("sweep over small N") {
  Document d = example("double_tetrahedron");
  auto fit = sweep(d.T, *d.D, {3, 5, 7});
  REQUIRE(fit.samples.size() == 3);
  // K = N^-2N on this sphere
  for (const auto& s : fit.samples) CHECK(std::abs(s.logAbsK + 2 * s.N * std::log(double(s.N))) < 1e-8);
  CHECK(maxFeasibleN(d.T, d.D->b, 1e6) >= 7);
  Document lens = example("lens_7_1");
  CHECK(maxFeasibleN(lens.T, lens.D->b, 1e3) < maxFeasibleN(lens.T, lens.D->b, 1e7));
}
