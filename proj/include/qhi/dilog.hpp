#pragma once

#include <array>
#include <vector>

#include "qhi/ideal.hpp"

namespace qhi {

// Principal branch of the dilogarithm.
Complex li2(Complex z);

// D(w) = Im Li2(w) + arg(1-w) log|w|. Throws DegenerateModulus at 0 and 1.
double blochWigner(Complex w);

// Lobachevsky function; Taylor series about 0 after reduction to [-pi/2, pi/2].
double lobachevsky(double theta);

// Bernoulli numbers B_0..B_n as doubles (B_1 = -1/2), computed exactly once.
const std::vector<double>& bernoulliNumbers();

inline constexpr double kHalfPiSquared = 4.934802200544679;  // pi^2 / 2

struct DilogValue {
  Complex value;                    // unreduced
  double modulus = kHalfPiSquared;  // real period of the ambiguity lattice
  Complex reduced() const;          // real part moved into [0, modulus)
};

// Distance of a complex number from the lattice modulus * Z.
double latticeDistance(Complex v, double modulus = kHalfPiSquared);

enum class RogersConvention {
  Neumann,  // Li2(w) + (log w + p pi i)(log(1-w) + q pi i)/2 - pi^2/6
  Literal,  // Li2(w) + (log w + p pi i)(log(1-w) - q pi i)/2 - pi^2/6
};

DilogValue rogersLifted(Complex w, long long p, long long q, RogersConvention conv = RogersConvention::Neumann);

DilogValue dilogInvariant(const std::vector<IdealTetrahedron<Complex>>& tets,
                          const std::vector<std::array<long long, 2>>& pq,
                          RogersConvention conv = RogersConvention::Neumann);

struct VolumeReport {
  std::vector<double> perTet;  // sign * D(w0); flat tetrahedra give 0
  double total = 0;
  double cs = 0;               // -Re of the invariant, reduced mod pi^2/2
  DilogValue invariant;
  std::vector<std::array<long long, 2>> flattening;
};

VolumeReport volumeReport(const std::vector<IdealTetrahedron<Complex>>& tets,
                          const std::vector<std::array<long long, 2>>& pq);

}  // namespace qhi
