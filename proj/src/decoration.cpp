#include "qhi/decoration.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "qhi/errors.hpp"
#include "qhi/intlinalg.hpp"

namespace qhi {

std::string toString(const GaussianRational& z) {
  std::ostringstream os;
  os << z.re << (z.im < 0 ? "-" : "+") << abs(z.im) << "i";
  return os.str();
}

Branching Branching::fromOrder(const Perm4& order) {
  Branching b;
  std::array<bool, 4> seen{};
  for (int i = 0; i < 4; ++i) {
    if (order[i] < 0 || order[i] > 3 || seen[order[i]])
      fail(ErrorKind::NoTotalOrder, "branching order is not a permutation of the four vertices");
    seen[order[i]] = true;
  }
  b.order = order;
  b.rank = inverse(order);
  return b;
}

int Branching::direction(int e) const {
  return rank[kEdgeVertex[e][0]] < rank[kEdgeVertex[e][1]] ? 1 : -1;
}

Branching checkBranching(const std::array<bool, 6>& up) {
  for (int f = 0; f < 4; ++f) {
    auto v = faceVertices(f);
    bool ab = up[edgeIndex(v[0], v[1])], bc = up[edgeIndex(v[1], v[2])], ac = up[edgeIndex(v[0], v[2])];
    if ((ab && bc && !ac) || (!ab && !bc && ac))
      fail(ErrorKind::CoherentFace, "face opposite vertex " + std::to_string(f) + " is coherently oriented");
  }
  std::array<int, 4> out{};
  for (int e = 0; e < 6; ++e) out[up[e] ? kEdgeVertex[e][0] : kEdgeVertex[e][1]]++;
  Perm4 order{-1, -1, -1, -1};
  for (int v = 0; v < 4; ++v) {
    int pos = 3 - out[v];
    if (order[pos] >= 0) fail(ErrorKind::NoTotalOrder, "edge orientations do not define a total order");
    order[pos] = v;
  }
  return Branching::fromOrder(order);
}

template <class S>
DecoratedTetrahedron<S> s4Act(const Perm4& s, const DecoratedTetrahedron<S>& d) {
  DecoratedTetrahedron<S> r = d;
  Perm4 order{};
  for (int i = 0; i < 4; ++i) order[s[i]] = d.b.order[i];
  r.b = Branching::fromOrder(order);
  r.sign = d.sign * parity(s);
  for (int e = 0; e < 6; ++e)
    if (r.b.direction(e) != d.b.direction(e)) r.z[e] = inverse(d.z[e]);
  return r;
}

bool chargeValidOnTet(const std::array<int, 6>& c) {
  for (int e = 0; e < 3; ++e)
    if (c[e] != c[5 - e]) return false;
  return c[0] + c[1] + c[2] == 1;
}

std::array<int, 3> chargePairs(const Branching& b, const std::array<int, 6>& c) {
  auto at = [&](int i, int j) { return c[edgeIndex(b.order[i], b.order[j])]; };
  return {at(0, 1), at(1, 2), at(0, 2)};
}

template <class S>
DecoratedTetrahedron<S> tetrahedron(const Triangulation& T, const Decoration<S>& D, int t) {
  DecoratedTetrahedron<S> d;
  d.sign = D.sign[t];
  d.b = D.b[t];
  for (int e = 0; e < 6; ++e) d.z[e] = D.z[T.edgeClass(t, e)];
  d.c = D.c[t];
  return d;
}

namespace {
template <class S>
Decoration<Complex> convert(const Decoration<S>& D) {
  Decoration<Complex> out;
  out.b = D.b;
  out.sign = D.sign;
  out.c = D.c;
  for (const auto& z : D.z) out.z.push_back(toComplex(z));
  return out;
}
}  // namespace

Decoration<Complex> toComplex(const Decoration<GaussianRational>& D) { return convert(D); }
Decoration<Complex> toComplex(const Decoration<Complex>& D) { return D; }

int orientationSign(const Triangulation& T, int t, const Branching& b) {
  return T.orientation(t) * parity(b.order);
}

std::vector<int> orientationSigns(const Triangulation& T, const std::vector<Branching>& b) {
  std::vector<int> s(T.size());
  for (int t = 0; t < T.size(); ++t) s[t] = orientationSign(T, t, b[t]);
  return s;
}

std::vector<int> edgeBDirections(const Triangulation& T, const std::vector<Branching>& b) {
  std::vector<int> dir(T.numEdges(), 0);
  for (int s = 0; s < T.numEdges(); ++s) {
    int d = 0;
    for (auto [t, e] : T.edgePreimages(s)) {
      int here = b[t].direction(e) * T.edgeSense(t, e);
      if (d == 0) d = here;
      else if (d != here) { d = 0; break; }
    }
    dir[s] = d;
  }
  return dir;
}

template <class S>
bool cocycleCheck(const Triangulation& T, const std::vector<Branching>& b, const std::vector<Borel<S>>& z,
                  double tol) {
  if (static_cast<int>(z.size()) != T.numEdges()) return false;
  for (int t = 0; t < T.size(); ++t) {
    auto at = [&](int i, int j) { return z[T.edgeClass(t, edgeIndex(b[t].order[i], b[t].order[j]))]; };
    for (int skip = 0; skip < 4; ++skip) {
      std::array<int, 3> p{};
      int n = 0;
      for (int i = 0; i < 4; ++i)
        if (i != skip) p[n++] = i;
      if (!nearlyEqual(at(p[0], p[1]) * at(p[1], p[2]), at(p[0], p[2]), tol)) return false;
    }
  }
  return true;
}

std::vector<int> chargeClass(const Triangulation& T, const std::vector<std::array<int, 6>>& c) {
  return chargeClass(T.dualCycles(), c);
}

std::vector<int> chargeClass(const std::vector<std::vector<DualStep>>& cycles,
                             const std::vector<std::array<int, 6>>& c) {
  std::vector<int> out;
  for (const auto& cyc : cycles) {
    long long s = 0;
    for (const auto& step : cyc) s += c[step.tet][sharedEdge(step.in, step.out)];
    out.push_back(static_cast<int>(((s % 2) + 2) % 2));
  }
  return out;
}

ChargeReport chargeCheck(const Triangulation& T, const std::vector<std::array<int, 6>>& c) {
  ChargeReport r;
  for (int t = 0; t < T.size(); ++t)
    if (!chargeValidOnTet(c[t])) r.badTets.push_back(t);
  r.edgeSums.assign(T.numEdges(), 0);
  for (int s = 0; s < T.numEdges(); ++s) {
    for (auto [t, e] : T.edgePreimages(s)) r.edgeSums[s] += c[t][e];
    if (r.edgeSums[s] != (T.inHamiltonian(s) ? 0 : 2)) r.badEdges.push_back(s);
  }
  auto cls = chargeClass(T, c);
  for (size_t i = 0; i < cls.size(); ++i)
    if (cls[i]) r.oddCycles.push_back(static_cast<int>(i));
  r.classVanishes = r.oddCycles.empty();
  return r;
}

bool ValidationReport::ok() const {
  for (int i = 1; i <= 7; ++i)
    if (!item[i]) return false;
  return fullable && full && hamiltonian;
}

template <class S>
ValidationReport validateDTriangulation(const Triangulation& T, const Decoration<S>& D) {
  ValidationReport r;
  const int k = T.size();
  if (static_cast<int>(D.b.size()) != k || static_cast<int>(D.sign.size()) != k ||
      static_cast<int>(D.c.size()) != k || static_cast<int>(D.z.size()) != T.numEdges()) {
    r.item.fill(false);
    r.full = false;
    r.messages.push_back("decoration sizes do not match the triangulation");
    return r;
  }
  auto dirs = edgeBDirections(T, D.b);
  for (int s = 0; s < T.numEdges(); ++s)
    if (dirs[s] == 0) {
      r.item[1] = false;
      r.messages.push_back("(1) edge " + std::to_string(s) + ": branchings disagree across the pairing");
    }
  if (r.item[1] && !cocycleCheck(T, D.b, D.z)) {
    r.item[2] = false;
    r.messages.push_back("(2) z fails the cocycle condition on some face");
  }
  for (int s = 0; s < T.numEdges(); ++s)
    if (isZero(D.z[s].x)) {
      r.full = false;
      r.item[2] = false;
      r.messages.push_back("(2) edge " + std::to_string(s) + " is not full (x = 0)");
    }
  for (int t = 0; t < k; ++t) {
    if (!chargeValidOnTet(D.c[t])) {
      r.item[3] = false;
      r.messages.push_back("(3) tet " + std::to_string(t) + ": charge violates the per-tetrahedron rules");
    }
    if (D.sign[t] != orientationSign(T, t, D.b[t])) {
      r.item[4] = false;
      r.messages.push_back("(4) tet " + std::to_string(t) + ": sign disagrees with the branching orientation");
    }
  }
  auto cr = chargeCheck(T, D.c);
  if (!cr.badEdges.empty()) {
    r.item[6] = false;
    for (int s : cr.badEdges)
      r.messages.push_back("(6) edge " + std::to_string(s) + ": charge sum " + std::to_string(cr.edgeSums[s]));
  }
  if (!cr.classVanishes) {
    r.item[7] = false;
    r.messages.push_back("(7) [c] does not vanish");
  }
  r.fullable = T.isFullable();
  if (!r.fullable) r.messages.push_back("triangulation is not fullable");
  auto hr = validateHamiltonian(T, T.hamiltonianIds());
  r.hamiltonian = hr.valid;
  for (const auto& p : hr.problems) r.messages.push_back("H: " + p);
  return r;
}

namespace {

// parity of [c] on each dual cycle as a function of the pair unknowns
std::vector<std::vector<int>> classMatrix(const Triangulation& T) {
  std::vector<std::vector<int>> rows;
  for (const auto& cyc : T.dualCycles()) {
    std::vector<int> row(3 * T.size(), 0);
    for (const auto& st : cyc) row[3 * st.tet + pairOfLocalEdge(sharedEdge(st.in, st.out))] ^= 1;
    rows.push_back(row);
  }
  return rows;
}

std::vector<int> parityOf(const std::vector<std::vector<int>>& rows, const std::vector<long long>& v) {
  std::vector<int> out;
  for (const auto& row : rows) {
    long long s = 0;
    for (size_t i = 0; i < row.size(); ++i)
      if (row[i]) s += v[i];
    out.push_back(static_cast<int>(((s % 2) + 2) % 2));
  }
  return out;
}

}  // namespace

std::vector<std::array<int, 6>> chargesFromPairs(const std::vector<long long>& pairs) {
  std::vector<std::array<int, 6>> c(pairs.size() / 3);
  for (size_t t = 0; t < c.size(); ++t)
    for (int e = 0; e < 6; ++e) c[t][e] = static_cast<int>(pairs[3 * t + pairOfLocalEdge(e)]);
  return c;
}

std::vector<long long> pairsFromCharges(const std::vector<std::array<int, 6>>& c) {
  std::vector<long long> p(3 * c.size());
  for (size_t t = 0; t < c.size(); ++t)
    for (int j = 0; j < 3; ++j) p[3 * t + j] = c[t][j];
  return p;
}

ChargeLattice chargeLattice(const Triangulation& T) {
  const int n = 3 * T.size();
  IMat A;
  IVec b;
  for (int t = 0; t < T.size(); ++t) {
    IVec row(n, 0);
    row[3 * t] = row[3 * t + 1] = row[3 * t + 2] = 1;
    A.push_back(row);
    b.push_back(1);
  }
  for (int s = 0; s < T.numEdges(); ++s) {
    IVec row(n, 0);
    for (auto [t, e] : T.edgePreimages(s)) row[3 * t + pairOfLocalEdge(e)] += 1;
    A.push_back(row);
    b.push_back(T.inHamiltonian(s) ? 0 : 2);
  }
  auto sol = solveInteger(A, b, n);
  if (!sol.consistent) fail(ErrorKind::NoValidCharge, "the charge equations have no integer solution");
  return {sol.particular, sol.kernel};
}

std::optional<std::vector<long long>> fixChargeClass(const Triangulation& T, std::vector<long long> pairs,
                                                     const std::vector<std::vector<long long>>& kernel) {
  auto rows = classMatrix(T);
  auto target = parityOf(rows, pairs);
  const int m = static_cast<int>(rows.size());
  const int k = static_cast<int>(kernel.size());
  // solve sum a_j parity(kernel_j) = target over GF(2)
  std::vector<std::vector<int>> M(m, std::vector<int>(k + 1, 0));
  for (int j = 0; j < k; ++j) {
    auto col = parityOf(rows, kernel[j]);
    for (int i = 0; i < m; ++i) M[i][j] = col[i];
  }
  for (int i = 0; i < m; ++i) M[i][k] = target[i];
  std::vector<int> pivotCol;
  int r = 0;
  for (int j = 0; j < k && r < m; ++j) {
    int p = -1;
    for (int i = r; i < m; ++i)
      if (M[i][j]) { p = i; break; }
    if (p < 0) continue;
    std::swap(M[r], M[p]);
    for (int i = 0; i < m; ++i)
      if (i != r && M[i][j])
        for (int c = j; c <= k; ++c) M[i][c] ^= M[r][c];
    pivotCol.push_back(j);
    ++r;
  }
  for (int i = r; i < m; ++i)
    if (M[i][k]) return std::nullopt;
  for (int i = 0; i < r; ++i)
    if (M[i][k])
      for (size_t x = 0; x < pairs.size(); ++x) pairs[x] += kernel[pivotCol[i]][x];
  return pairs;
}

std::vector<std::array<int, 6>> findCharge(const Triangulation& T) {
  auto lat = chargeLattice(T);
  auto fixed = fixChargeClass(T, lat.particular, lat.kernel);
  if (!fixed) fail(ErrorKind::NoValidCharge, "no integral charge with [c] = 0");
  auto rows = classMatrix(T);
  auto accept = [&](const IVec& v) {
    for (int p : parityOf(rows, v))
      if (p) return false;
    return true;
  };
  return chargesFromPairs(minimizeMaxNorm(*fixed, lat.kernel, accept, 1));
}

template <class S>
std::vector<Borel<S>> coboundary(const Triangulation& T, const std::vector<Branching>& b,
                                 const std::vector<Borel<S>>& u) {
  std::vector<Borel<S>> z(T.numEdges());
  for (int s = 0; s < T.numEdges(); ++s) {
    auto [t, e] = T.edgePreimages(s).front();
    int tail = kEdgeVertex[e][0], head = kEdgeVertex[e][1];
    if (b[t].direction(e) < 0) std::swap(tail, head);
    z[s] = inverse(u[T.vertexClass(t, tail)]) * u[T.vertexClass(t, head)];
  }
  return z;
}

#define QHI_INSTANTIATE(S)                                                                              \
  template DecoratedTetrahedron<S> s4Act(const Perm4&, const DecoratedTetrahedron<S>&);                 \
  template DecoratedTetrahedron<S> tetrahedron(const Triangulation&, const Decoration<S>&, int);        \
  template bool cocycleCheck(const Triangulation&, const std::vector<Branching>&,                       \
                             const std::vector<Borel<S>>&, double);                                     \
  template ValidationReport validateDTriangulation(const Triangulation&, const Decoration<S>&);         \
  template std::vector<Borel<S>> coboundary(const Triangulation&, const std::vector<Branching>&,        \
                                            const std::vector<Borel<S>>&);

QHI_INSTANTIATE(Complex)
QHI_INSTANTIATE(GaussianRational)

}  // namespace qhi
