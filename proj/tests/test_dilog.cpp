#include "doctest.h"

#include <numbers>
#include <random>

#include "qhi/errors.hpp"
#include "qhi/examples.hpp"

using namespace qhi;

namespace {

constexpr double kPi = std::numbers::pi;

// Lobachevsky function by direct quadrature of -log|2 sin t| (Simpson, singular end handled
// by subtracting log t).
double lobachevskyQuadrature(double theta) {
  // -int_0^theta log(2 sin t) dt = -int_0^theta log(2 sin t / t) dt - (theta log theta - theta)
  const int n = 20000;
  double h = theta / n, s = 0;
  auto f = [](double t) { return t == 0 ? std::log(2.0) : std::log(2 * std::sin(t) / t); };
  for (int i = 0; i <= n; ++i) s += f(i * h) * (i == 0 || i == n ? 1 : (i % 2 ? 4 : 2));
  return -s * h / 3 - (theta * std::log(theta) - theta);
}

}  // namespace

TEST_CASE("Bloch-Wigner at the sixth root of unity") {
  Complex w = std::polar(1.0, kPi / 3);
  CHECK(std::abs(blochWigner(w) - 1.0149416064096536) < 1e-12);
  CHECK(std::abs(3 * lobachevsky(kPi / 3) - 1.0149416064096536) < 1e-12);
  CHECK(std::abs(lobachevsky(kPi / 3) - lobachevskyQuadrature(kPi / 3)) < 1e-10);
}

TEST_CASE("Lobachevsky series against quadrature") {
  for (double th : {0.1, 0.5, 1.0, 1.5, 2.5})
    CHECK(std::abs(lobachevsky(th) - lobachevskyQuadrature(th)) < 1e-9);
}

TEST_CASE("Bloch-Wigner vanishes on the real line") {
  for (double x : {-3.0, -0.5, 0.25, 0.9, 1.5, 7.0}) CHECK(std::abs(blochWigner(x)) < 1e-14);
  CHECK_THROWS_AS(blochWigner(0.0), Error);
  CHECK_THROWS_AS(blochWigner(1.0), Error);
}

TEST_CASE("Bloch-Wigner symmetries") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0, 2);
  for (int i = 0; i < 200; ++i) {
    Complex w(g(rng), g(rng));
    double d = blochWigner(w);
    CHECK(std::abs(blochWigner(1.0 - 1.0 / w) - d) < 1e-12);
    CHECK(std::abs(blochWigner(1.0 / (1.0 - w)) - d) < 1e-12);
    CHECK(std::abs(blochWigner(std::conj(w)) + d) < 1e-12);
    CHECK(std::abs(blochWigner(1.0 / w) + d) < 1e-12);
    // triangle formula: the volume equals the sum of Lobachevsky values of the angles
    if (w.imag() > 0) {
      double a = std::arg(w), b = std::arg(1.0 / (1.0 - w)), c = kPi - a - b;
      CHECK(std::abs(d - lobachevsky(a) - lobachevsky(b) - lobachevsky(c)) < 1e-10);
    }
  }
}

TEST_CASE("dilogarithm reflection and values") {
  CHECK(std::abs(li2(1.0) - kPi * kPi / 6) < 1e-14);
  CHECK(std::abs(li2(-1.0) + kPi * kPi / 12) < 1e-14);
  CHECK(std::abs(li2(0.5) - (kPi * kPi / 12 - std::log(2.0) * std::log(2.0) / 2)) < 1e-14);
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g(0, 1.5);
  for (int i = 0; i < 200; ++i) {
    Complex w(g(rng), g(rng));
    Complex lhs = li2(w) + li2(1.0 - w);
    Complex rhs = kPi * kPi / 6 - std::log(w) * std::log(1.0 - w);
    CHECK(std::abs(lhs - rhs) < 1e-12);
  }
  // power series inside the unit disk
  Complex z(0.3, -0.4), s = 0, p = 1;
  for (int k = 1; k < 200; ++k) {
    p *= z;
    s += p / double(k * k);
  }
  CHECK(std::abs(li2(z) - s) < 1e-15);
}

TEST_CASE("lattice reduction") {
  DilogValue v{Complex(3 * kHalfPiSquared + 0.25, 1.5)};
  CHECK(std::abs(v.reduced() - Complex(0.25, 1.5)) < 1e-12);
  CHECK(latticeDistance(Complex(-2 * kHalfPiSquared, 0)) < 1e-12);
  CHECK(latticeDistance(Complex(1.0, 0)) > 0.9);
}

TEST_CASE("figure-eight total") {
  Triangulation T = figureEightPattern();
  auto tets = figureEightIdeal(T);
  auto f = solveFlattening(T, tets);
  auto rep = volumeReport(tets, f.pq);
  CHECK(std::abs(rep.total - 2.029883212819) < 1e-9);
  CHECK(std::abs(rep.invariant.value.imag() - 2.029883212819) < 1e-9);
  for (double v : rep.perTet) CHECK(std::abs(v - 1.0149416064096536) < 1e-12);
}

TEST_CASE("lifted Rogers dilogarithm") {
  Complex w(0.3, 0.8);
  auto r = rogersLifted(w, 0, 0);
  Complex want = li2(w) + 0.5 * std::log(w) * std::log(1.0 - w) - kPi * kPi / 6;
  CHECK(std::abs(r.value - want) < 1e-14);
  CHECK(std::abs(rogersLifted(w, 0, 0, RogersConvention::Literal).value - want) < 1e-14);
  // one unit of p adds pi i (log(1-w) + q pi i)/2
  auto s = rogersLifted(w, 1, 0);
  CHECK(std::abs(s.value - r.value - Complex(0, kPi) * std::log(1.0 - w) / 2.0) < 1e-13);
  CHECK_THROWS_AS(rogersLifted(1.0, 0, 0), Error);
}

TEST_CASE("flattening lattice moves change the total by multiples of pi^2/2") {
  Triangulation T = figureEightPattern();
  auto tets = figureEightIdeal(T);
  auto f = solveFlattening(T, tets);
  Complex base = dilogInvariant(tets, f.pq).value;
  for (const auto& k : f.kernel)
    for (int m : {-1, 1, 2}) {
      auto pq = f.pq;
      for (size_t t = 0; t < pq.size(); ++t) {
        pq[t][0] += m * k[2 * t];
        pq[t][1] += m * k[2 * t + 1];
      }
      CHECK(latticeDistance(dilogInvariant(tets, pq).value - base) < 1e-9);
    }
}

TEST_CASE("Bernoulli numbers") {
  const auto& B = bernoulliNumbers();
  REQUIRE(B.size() > 12);
  CHECK(B[0] == 1.0);
  CHECK(B[1] == -0.5);
  CHECK(std::abs(B[2] - 1.0 / 6) < 1e-15);
  CHECK(std::abs(B[12] + 691.0 / 2730) < 1e-13);
  CHECK(B[3] == 0.0);
}
