#include "qhi/ideal.hpp"

#include <cmath>
#include <numbers>

#include "qhi/errors.hpp"
#include "qhi/intlinalg.hpp"

namespace qhi {

template <class S>
ModularTriple<S> completeTriple(const S& w0) {
  if (isZero(w0) || isZero(w0 - S(1))) fail(ErrorKind::DegenerateModulus, "modulus must avoid 0 and 1");
  S w1 = S(1) / (S(1) - w0);
  S w2 = S(1) / (S(1) - w1);
  return {w0, w1, w2};
}

bool isFlat(const IdealTetrahedron<Complex>& t, double tol) {
  return std::abs(t.w.w0.imag()) <= tol * std::max(1.0, std::abs(t.w.w0));
}

template <class S>
std::array<S, 3> pValues(const DecoratedTetrahedron<S>& d) {
  auto x = [&](int i, int j) { return d.zAt(i, j).x; };
  return {x(0, 1) * x(2, 3), x(1, 2) * x(0, 3), S(0) - x(0, 2) * x(1, 3)};
}

template <class S>
IdealTetrahedron<S> idealize(const DecoratedTetrahedron<S>& d) {
  for (int e = 0; e < 6; ++e)
    if (isZero(d.z[e].x)) fail(ErrorKind::NotFull, "idealization needs a full cocycle");
  auto p = pValues(d);
  for (int i = 0; i < 3; ++i)
    if (isZero(p[i])) fail(ErrorKind::DegenerateModulus, "a product of opposite x-values vanishes");
  IdealTetrahedron<S> r;
  r.sign = d.sign;
  r.b = d.b;
  r.c = d.c;
  r.w = completeTriple(S(0) - p[1] / p[2]);
  return r;
}

template <class S>
std::vector<IdealTetrahedron<S>> idealizeTriangulation(const Triangulation& T, const Decoration<S>& D) {
  std::vector<IdealTetrahedron<S>> out;
  for (int t = 0; t < T.size(); ++t) out.push_back(idealize(tetrahedron(T, D, t)));
  return out;
}

template <class S>
IdealTetrahedron<S> s4Act(const Perm4& s, const IdealTetrahedron<S>& d) {
  IdealTetrahedron<S> r = d;
  Perm4 order{};
  for (int i = 0; i < 4; ++i) order[s[i]] = d.b.order[i];
  r.b = Branching::fromOrder(order);
  const int eps = parity(s);
  r.sign = d.sign * eps;
  S w0 = d.edgeModulus(edgeIndex(order[0], order[1]));
  r.w = completeTriple(eps > 0 ? w0 : S(1) / w0);
  return r;
}

template <class S>
S crossRatio(const std::array<ProjectivePoint<S>, 4>& v) {
  S a = bracket(v[2], v[1]), b = bracket(v[3], v[0]), c = bracket(v[2], v[0]), d = bracket(v[3], v[1]);
  if (isZero(a) || isZero(b) || isZero(c) || isZero(d))
    fail(ErrorKind::DegenerateModuli, "two ideal vertices coincide");
  return a * b / (c * d);
}

template <class S>
EdgeReport edgeProducts(const Triangulation& T, const std::vector<IdealTetrahedron<S>>& tets) {
  EdgeReport r;
  for (int s = 0; s < T.numEdges(); ++s) {
    Complex prod = 1;
    for (auto [t, e] : T.edgePreimages(s)) {
      Complex w = toComplex(tets[t].edgeModulus(e));
      prod *= tets[t].sign > 0 ? w : 1.0 / w;
    }
    r.products.push_back(prod);
    r.maxDeviation = std::max(r.maxDeviation, std::abs(prod - 1.0));
  }
  return r;
}

std::array<Complex, 3> logParameters(Complex w0, long long p, long long q) {
  const Complex ipi(0, std::numbers::pi);
  Complex l0 = std::log(w0) + static_cast<double>(p) * ipi;
  Complex l1 = -std::log(1.0 - w0) + static_cast<double>(q) * ipi;
  return {l0, l1, -l0 - l1};
}

std::vector<Complex> flatteningEdgeSums(const Triangulation& T, const std::vector<IdealTetrahedron<Complex>>& tets,
                                        const std::vector<std::array<long long, 2>>& pq) {
  std::vector<Complex> sums(T.numEdges(), 0.0);
  for (int t = 0; t < T.size(); ++t) {
    auto l = logParameters(tets[t].w.w0, pq[t][0], pq[t][1]);
    for (int e = 0; e < 6; ++e) {
      const auto& b = tets[t].b;
      int pair = pairOfPositions(b.rank[kEdgeVertex[e][0]], b.rank[kEdgeVertex[e][1]]);
      sums[T.edgeClass(t, e)] += static_cast<double>(tets[t].sign) * l[pair];
    }
  }
  return sums;
}

Flattening solveFlattening(const Triangulation& T, const std::vector<IdealTetrahedron<Complex>>& tets) {
  const int k = T.size();
  const int n = 2 * k;
  static const int coefP[3] = {1, 0, -1}, coefQ[3] = {0, 1, -1};
  std::vector<std::array<long long, 2>> zero(k, {0, 0});
  auto base = flatteningEdgeSums(T, tets, zero);
  IMat A(T.numEdges(), IVec(n, 0));
  IVec b(T.numEdges(), 0);
  for (int t = 0; t < k; ++t)
    for (int e = 0; e < 6; ++e) {
      const auto& br = tets[t].b;
      int pair = pairOfPositions(br.rank[kEdgeVertex[e][0]], br.rank[kEdgeVertex[e][1]]);
      int s = T.edgeClass(t, e);
      A[s][2 * t] += tets[t].sign * coefP[pair];
      A[s][2 * t + 1] += tets[t].sign * coefQ[pair];
    }
  for (int s = 0; s < T.numEdges(); ++s) {
    // sum = base + pi i (A x) = 0
    Complex r = -base[s] / Complex(0, std::numbers::pi);
    double rounded = std::round(r.real());
    if (std::abs(r.imag()) > 1e-8 || std::abs(r.real() - rounded) > 1e-8)
      fail(ErrorKind::NoSolution, "edge " + std::to_string(s) + ": log-sum is not an integer multiple of pi i");
    b[s] = static_cast<long long>(rounded);
  }
  auto sol = solveInteger(A, b, n);
  if (!sol.consistent)
    fail(ErrorKind::NoSolution, "flattening equations are inconsistent (row " + std::to_string(sol.obstruction) +
                                    " of the reduced system)");
  auto best = minimizeMaxNorm(sol.particular, sol.kernel);
  Flattening f;
  for (int t = 0; t < k; ++t) f.pq.push_back({best[2 * t], best[2 * t + 1]});
  f.kernel = sol.kernel;
  return f;
}

IdealTetrahedron<Complex> toComplex(const IdealTetrahedron<GaussianRational>& t) {
  IdealTetrahedron<Complex> r;
  r.sign = t.sign;
  r.b = t.b;
  r.c = t.c;
  r.w = {toComplex(t.w.w0), toComplex(t.w.w1), toComplex(t.w.w2)};
  return r;
}

#define QHI_INSTANTIATE(S)                                                                           \
  template ModularTriple<S> completeTriple(const S&);                                                \
  template std::array<S, 3> pValues(const DecoratedTetrahedron<S>&);                                 \
  template IdealTetrahedron<S> idealize(const DecoratedTetrahedron<S>&);                             \
  template std::vector<IdealTetrahedron<S>> idealizeTriangulation(const Triangulation&, const Decoration<S>&); \
  template IdealTetrahedron<S> s4Act(const Perm4&, const IdealTetrahedron<S>&);                      \
  template S crossRatio(const std::array<ProjectivePoint<S>, 4>&);                                   \
  template EdgeReport edgeProducts(const Triangulation&, const std::vector<IdealTetrahedron<S>>&);

QHI_INSTANTIATE(Complex)
QHI_INSTANTIATE(GaussianRational)

}  // namespace qhi
