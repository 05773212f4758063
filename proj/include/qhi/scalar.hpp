#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <complex>
#include <string>

namespace qhi {

using Complex = std::complex<double>;
using Rational = boost::multiprecision::cpp_rational;

// Exact complex numbers with rational parts, used where identities must hold exactly.
struct GaussianRational {
  Rational re{0}, im{0};

  GaussianRational() = default;
  GaussianRational(long long r) : re(r) {}  // NOLINT: implicit from integers is convenient
  GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend GaussianRational operator-(const GaussianRational& a) { return {-a.re, -a.im}; }
  friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
    Rational n = b.re * b.re + b.im * b.im;
    if (n == 0) throw std::domain_error("division by zero in Gaussian rationals");
    return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
  }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re == b.re && a.im == b.im;
  }
  GaussianRational& operator+=(const GaussianRational& o) { return *this = *this + o; }
  GaussianRational& operator*=(const GaussianRational& o) { return *this = *this * o; }
};

inline bool isZero(const Complex& z) { return z == Complex(0.0, 0.0); }
inline bool isZero(const GaussianRational& z) { return z.re == 0 && z.im == 0; }

inline Complex toComplex(const Complex& z) { return z; }
inline Complex toComplex(const GaussianRational& z) {
  return {z.re.convert_to<double>(), z.im.convert_to<double>()};
}

inline double magnitude(const Complex& z) { return std::abs(z); }
inline double magnitude(const GaussianRational& z) { return std::abs(toComplex(z)); }

// Exact equality for rationals, relative tolerance for doubles.
inline bool nearlyEqual(const Complex& a, const Complex& b, double tol = 1e-12) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}
inline bool nearlyEqual(const GaussianRational& a, const GaussianRational& b, double = 0) { return a == b; }

inline GaussianRational gaussian(long long re, long long im = 0, long long den = 1) {
  return {Rational(re, den), Rational(im, den)};
}

std::string toString(const GaussianRational& z);

}  // namespace qhi
