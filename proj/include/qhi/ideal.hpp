#pragma once

#include <array>
#include <vector>

#include "qhi/decoration.hpp"

namespace qhi {

// Cross-ratio moduli (w0, w1, w2) attached to the edge pairs {01,23}, {12,03}, {02,13}.
template <class S>
struct ModularTriple {
  S w0, w1, w2;
  const S& operator[](int i) const { return i == 0 ? w0 : (i == 1 ? w1 : w2); }
};

// (w0, 1/(1-w0), 1/(1-w1)). Throws DegenerateModulus for w0 in {0, 1}.
template <class S>
ModularTriple<S> completeTriple(const S& w0);

template <class S>
struct IdealTetrahedron {
  int sign = 1;
  Branching b;
  ModularTriple<S> w;
  std::array<int, 6> c{};

  // modulus carried by local edge e
  const S& edgeModulus(int e) const {
    return w[pairOfPositions(b.rank[kEdgeVertex[e][0]], b.rank[kEdgeVertex[e][1]])];
  }
};

bool isFlat(const IdealTetrahedron<Complex>& t, double tol = 1e-14);

// p0 = x(01)x(23), p1 = x(12)x(03), p2 = -x(02)x(13) in branch positions.
template <class S>
std::array<S, 3> pValues(const DecoratedTetrahedron<S>& d);

// w_i = -p_{i+1}/p_{i+2}. Throws NotFull, DegenerateModulus.
template <class S>
IdealTetrahedron<S> idealize(const DecoratedTetrahedron<S>& d);

template <class S>
std::vector<IdealTetrahedron<S>> idealizeTriangulation(const Triangulation& T, const Decoration<S>& D);

// Ideal tetrahedra are acted on like D-tetrahedra, with w(e) -> w(e)^{sign(s)} per edge.
template <class S>
IdealTetrahedron<S> s4Act(const Perm4& s, const IdealTetrahedron<S>& d);

template <class S>
S crossRatio(const S& v0, const S& v1, const S& v2, const S& v3) {
  return (v2 - v1) * (v3 - v0) / ((v2 - v0) * (v3 - v1));
}

// Homogeneous point of CP^1; [P, Q] = P.x Q.y - P.y Q.x.
template <class S>
struct ProjectivePoint {
  S x{0}, y{1};
};
template <class S>
S bracket(const ProjectivePoint<S>& p, const ProjectivePoint<S>& q) {
  return p.x * q.y - p.y * q.x;
}
// cross-ratio [v2,v1][v3,v0] / ([v2,v0][v3,v1]); throws DegenerateModuli on a vanishing bracket
template <class S>
S crossRatio(const std::array<ProjectivePoint<S>, 4>& v);

struct EdgeReport {
  std::vector<Complex> products;  // signed modulus product per edge class
  double maxDeviation = 0;        // max |product - 1|
  bool ok(double tol = 1e-10) const { return maxDeviation <= tol; }
};

template <class S>
EdgeReport edgeProducts(const Triangulation& T, const std::vector<IdealTetrahedron<S>>& tets);

// Log-parameters l0 = log w0 + p pi i, l1 = -log(1-w0) + q pi i, l2 = -l0 - l1 (principal logs).
std::array<Complex, 3> logParameters(Complex w0, long long p, long long q);

struct Flattening {
  std::vector<std::array<long long, 2>> pq;       // (p, q) per tetrahedron
  std::vector<std::vector<long long>> kernel;     // homogeneous solutions, interleaved p,q
};

// Signed sum of log-parameters around every edge class.
std::vector<Complex> flatteningEdgeSums(const Triangulation& T, const std::vector<IdealTetrahedron<Complex>>& tets,
                                        const std::vector<std::array<long long, 2>>& pq);

// Integer (p, q) making every edge sum vanish, least max-norm. Throws NoSolution.
Flattening solveFlattening(const Triangulation& T, const std::vector<IdealTetrahedron<Complex>>& tets);

IdealTetrahedron<Complex> toComplex(const IdealTetrahedron<GaussianRational>& t);

}  // namespace qhi
