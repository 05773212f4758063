#include "qhi/dilog.hpp"

#include <cmath>
#include <numbers>

#include "qhi/errors.hpp"

namespace qhi {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kPi2Over6 = kPi * kPi / 6.0;
}  // namespace

const std::vector<double>& bernoulliNumbers() {
  static const std::vector<double> table = [] {
    const int n = 60;
    std::vector<Rational> B(n + 1);
    B[0] = 1;
    // sum_{j=0}^{m} C(m+1, j) B_j = 0
    for (int m = 1; m <= n; ++m) {
      Rational s = 0;
      Rational binom = 1;  // C(m+1, j)
      for (int j = 0; j < m; ++j) {
        s += binom * B[j];
        binom = binom * (m + 1 - j) / (j + 1);
      }
      B[m] = -s / (m + 1);
    }
    std::vector<double> out;
    for (const auto& b : B) out.push_back(b.convert_to<double>());
    return out;
  }();
  return table;
}

namespace {

// Li2 for |z| <= 1, Re z <= 1/2 via the series in u = -log(1-z)
Complex li2Series(Complex z) {
  static const std::vector<double> coef = [] {
    const auto& B = bernoulliNumbers();
    std::vector<double> c;
    double fact = 1;  // (n+1)!
    for (int n = 0; n + 1 < static_cast<int>(B.size()); ++n) {
      fact *= (n + 1);
      c.push_back(B[n] / fact);
    }
    return c;
  }();
  Complex u = -std::log(1.0 - z);
  Complex pow = u, sum = 0;
  for (size_t n = 0; n < coef.size(); ++n) {
    if (coef[n] != 0) {
      Complex term = coef[n] * pow;
      sum += term;
      if (n > 4 && std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    pow *= u;
  }
  return sum;
}

}  // namespace

Complex li2(Complex z) {
  if (z == Complex(0, 0)) return 0;
  if (z == Complex(1, 0)) return kPi2Over6;
  if (std::norm(z) > 1.0) {
    // Li2(z) = -Li2(1/z) - pi^2/6 - log^2(-z)/2
    Complex l = std::log(-z);
    return -li2(1.0 / z) - kPi2Over6 - 0.5 * l * l;
  }
  if (z.real() > 0.5) {
    // Li2(z) = -Li2(1-z) + pi^2/6 - log z log(1-z)
    return -li2Series(1.0 - z) + kPi2Over6 - std::log(z) * std::log(1.0 - z);
  }
  return li2Series(z);
}

double blochWigner(Complex w) {
  if (w == Complex(0, 0) || w == Complex(1, 0)) fail(ErrorKind::DegenerateModulus, "Bloch-Wigner at 0 or 1");
  if (w.imag() == 0) return 0;
  return li2(w).imag() + std::arg(1.0 - w) * std::log(std::abs(w));
}

double lobachevsky(double theta) {
  // Lambda(theta) = theta - theta log(2 theta) - sum_n (-1)^n 2^{2n-1} B_{2n} theta^{2n+1} / (n (2n)! (2n+1))
  // odd and pi-periodic: the series is only used on [0, pi/2]
  theta = std::remainder(theta, std::numbers::pi);
  if (theta < 0) return -lobachevsky(-theta);
  if (theta == 0) return 0;
  const auto& B = bernoulliNumbers();
  double sum = 0, fact = 1, pow2 = 0.5, th = theta;  // (2n)!, 2^{2n-1}, theta^{2n+1}
  for (int n = 1; 2 * n < static_cast<int>(B.size()); ++n) {
    fact *= (2 * n - 1) * (2 * n);
    pow2 *= 4;
    th *= theta * theta;
    double sgn = (n % 2) ? -1.0 : 1.0;
    sum += sgn * pow2 * B[2 * n] * th / (n * fact * (2 * n + 1));
  }
  return theta - theta * std::log(2 * theta) - sum;
}

double latticeDistance(Complex v, double modulus) {
  double k = std::round(v.real() / modulus);
  return std::hypot(v.real() - k * modulus, v.imag());
}

Complex DilogValue::reduced() const {
  double re = std::fmod(value.real(), modulus);
  if (re < 0) re += modulus;
  if (re >= modulus) re -= modulus;
  return {re, value.imag()};
}

DilogValue rogersLifted(Complex w, long long p, long long q, RogersConvention conv) {
  if (w == Complex(0, 0) || w == Complex(1, 0)) fail(ErrorKind::DegenerateModulus, "Rogers dilogarithm at 0 or 1");
  const Complex ipi(0, kPi);
  double qs = conv == RogersConvention::Neumann ? 1.0 : -1.0;
  Complex a = std::log(w) + static_cast<double>(p) * ipi;
  Complex b = std::log(1.0 - w) + qs * static_cast<double>(q) * ipi;
  return {li2(w) + 0.5 * a * b - kPi2Over6, kHalfPiSquared};
}

DilogValue dilogInvariant(const std::vector<IdealTetrahedron<Complex>>& tets,
                          const std::vector<std::array<long long, 2>>& pq, RogersConvention conv) {
  Complex total = 0;
  for (size_t t = 0; t < tets.size(); ++t)
    total += static_cast<double>(tets[t].sign) * rogersLifted(tets[t].w.w0, pq[t][0], pq[t][1], conv).value;
  return {total, kHalfPiSquared};
}

VolumeReport volumeReport(const std::vector<IdealTetrahedron<Complex>>& tets,
                          const std::vector<std::array<long long, 2>>& pq) {
  VolumeReport r;
  for (const auto& t : tets) {
    double v = isFlat(t) ? 0.0 : t.sign * blochWigner(t.w.w0);
    r.perTet.push_back(v);
    r.total += v;
  }
  r.invariant = dilogInvariant(tets, pq);
  DilogValue neg{-r.invariant.value, kHalfPiSquared};
  r.cs = neg.reduced().real();
  r.flattening = pq;
  return r;
}

}  // namespace qhi
