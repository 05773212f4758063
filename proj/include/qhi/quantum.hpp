#pragma once

#include <Eigen/Dense>
#include <array>
#include <iosfwd>
#include <numbers>
#include <vector>

#include "qhi/decoration.hpp"

namespace qhi {

// One determination of N-th roots shared by every entry: arguments are taken in
// (cut - 2 pi, cut] and divided by N.
struct RootSystem {
  int N = 3;
  double cut = std::numbers::pi;

  // Throws EvenN unless N is odd and at least 3.
  static RootSystem make(int N, double cut = std::numbers::pi);
  Complex omega() const;
  Complex omegaPow(long long k) const;
  double argument(Complex z) const;
  Complex log(Complex z) const;
  Complex root(Complex z) const;
};

// Cyclic representation of the quantum Borel algebra on one edge: K e_n = a^2 w^n e_n and
// E e_n = y a e_{n+1}.
struct CyclicRep {
  Complex a, y;
  Complex kappa() const { return a * a; }
  Complex eta() const { return y * a; }
};

CyclicRep cyclicRep(const Borel<Complex>& z, const RootSystem& R);

struct ReducedDecoration {
  RootSystem roots;
  std::vector<CyclicRep> reps;        // per edge class
  std::vector<std::array<int, 6>> cN; // c/2 mod N per tet and local edge
};

// inverse of 2 mod N times c, in [0, N)
int halfCharge(long long c, int N);

// Throws EvenN, NotFull.
ReducedDecoration reduceModN(const Triangulation& T, const Decoration<Complex>& D, const RootSystem& R);

// prod_{j=1..n} y / (z - x w^j). Throws ConstraintViolated unless x^N + y^N = z^N, PoleHit.
Complex cyclicDilog(Complex x, Complex y, Complex z, int n, int N);

// Gaussian binomial [n choose k] at q.
Complex qBinomial(int n, int k, Complex q);

enum class TensorRoute { Structured, Dense };

// Change of basis between the two bracketings of the triple tensor product of the reps on
// edges 01, 12, 23, restricted to highest vectors of weight matching edge 03. `reps` is indexed
// by local edges of the branch-ordered tetrahedron.
struct Intertwiner {
  int N = 0;
  std::array<int, 4> shifts{};  // weight shifts of the faces opposite positions 0..3
  Eigen::MatrixXcd M, Minv;
};
// Throws FormulaDomain when the weights do not close up or a slice is singular.
Intertwiner intertwiner(const std::array<CyclicRep, 6>& reps, const RootSystem& R,
                        TensorRoute route = TensorRoute::Structured);

// Rank-4 tensor of one tetrahedron. Leg k carries the state of the face opposite branch
// position k; storage index ((a0 N + a1) N + a2) N + a3.
struct StateTensor {
  int N = 0;
  int sign = 1;
  Branching b;
  std::vector<Complex> data;

  static size_t index(int N, int a0, int a1, int a2, int a3) {
    return ((static_cast<size_t>(a0) * N + a1) * N + a2) * N + a3;
  }
  const Complex& operator()(int a0, int a1, int a2, int a3) const { return data[index(N, a0, a1, a2, a3)]; }
};

// Positive tetrahedra take M, negative ones M^{-1}; both are scaled by the charge factor
// prod_e y(e)^{c(e)(1-N)/2}. Throws FormulaDomain, NotFull.
StateTensor buildStateTensor(const DecoratedTetrahedron<Complex>& d, const RootSystem& R,
                             TensorRoute route = TensorRoute::Structured);

// Binary dump: int32 N, tet id, sign, then N^4 (re, im) doubles, faces ordered by the local
// name of their opposite vertex.
void writeTensor(std::ostream& os, const StateTensor& t, int tetId);
StateTensor readTensor(std::istream& is, int* tetId = nullptr);

}  // namespace qhi
