#include "qhi/scissors.hpp"

#include "qhi/errors.hpp"

namespace qhi {

namespace {

template <class S>
bool sameDecorated(const DecoratedTetrahedron<S>& a, const DecoratedTetrahedron<S>& b, double tol) {
  if (a.sign != b.sign || !(a.b == b.b) || a.c != b.c) return false;
  for (int e = 0; e < 6; ++e)
    if (!nearlyEqual(a.z[e], b.z[e], tol)) return false;
  return true;
}

template <class S>
bool sameIdeal(const IdealTetrahedron<S>& a, const IdealTetrahedron<S>& b, double tol) {
  if (a.sign != b.sign || !(a.b == b.b) || a.c != b.c) return false;
  for (int i = 0; i < 3; ++i)
    if (!nearlyEqual(a.w[i], b.w[i], tol)) return false;
  return true;
}

// Rename local vertex v to pi[v]; the tetrahedron itself does not change.
template <class Tet>
Tet relabel(const Perm4& pi, const Tet& t) {
  Tet r = t;
  Perm4 order{};
  for (int i = 0; i < 4; ++i) order[i] = pi[t.b.order[i]];
  r.b = Branching::fromOrder(order);
  for (int e = 0; e < 6; ++e) {
    int f = edgeIndex(pi[kEdgeVertex[e][0]], pi[kEdgeVertex[e][1]]);
    r.c[f] = t.c[e];
    if constexpr (requires { t.z; }) r.z[f] = t.z[e];
  }
  return r;
}

template <class Tet>
Term<Tet> signFolded(Term<Tet> t) {
  t.coef *= t.tet.sign;
  t.tet.sign = 1;
  return t;
}

}  // namespace

bool sameTetrahedron(const DecoratedTetrahedron<Complex>& a, const DecoratedTetrahedron<Complex>& b, double tol) {
  return sameDecorated(a, b, tol);
}
bool sameTetrahedron(const DecoratedTetrahedron<GaussianRational>& a,
                     const DecoratedTetrahedron<GaussianRational>& b, double tol) {
  return sameDecorated(a, b, tol);
}
bool sameTetrahedron(const IdealTetrahedron<Complex>& a, const IdealTetrahedron<Complex>& b, double tol) {
  return sameIdeal(a, b, tol);
}
bool sameTetrahedron(const IdealTetrahedron<GaussianRational>& a, const IdealTetrahedron<GaussianRational>& b,
                     double tol) {
  return sameIdeal(a, b, tol);
}

template <class Tet>
long long FormalSum<Tet>::totalCoefficient() const {
  long long s = 0;
  for (const auto& t : terms) s += t.coef;
  return s;
}

template <class Tet>
FormalSum<Tet> FormalSum<Tet>::operator-() const {
  FormalSum r = *this;
  for (auto& t : r.terms) t.coef = -t.coef;
  return r;
}

template <class Tet>
FormalSum<Tet>& FormalSum<Tet>::operator+=(const FormalSum& o) {
  terms.insert(terms.end(), o.terms.begin(), o.terms.end());
  return *this;
}

template <class Tet>
FormalSum<Tet> collect(const FormalSum<Tet>& s, double tol) {
  FormalSum<Tet> out;
  for (const auto& raw : s.terms) {
    Term<Tet> t = signFolded(raw);
    bool merged = false;
    for (auto& u : out.terms)
      if (sameTetrahedron(u.tet, t.tet, tol)) {
        u.coef += t.coef;
        merged = true;
        break;
      }
    if (!merged) out.terms.push_back(t);
  }
  std::erase_if(out.terms, [](const Term<Tet>& t) { return t.coef == 0; });
  return out;
}

template <class Tet>
FormalSum<Tet> normalizeS4(const FormalSum<Tet>& s, double tol) {
  FormalSum<Tet> out;
  for (const auto& raw : s.terms) {
    Term<Tet> t = signFolded(Term<Tet>{raw.coef, s4Act(canonicalPermutation(raw.tet), raw.tet)});
    // relabelled copies with identity branching: rename by pi, then act by pi
    bool merged = false;
    for (const Perm4& pi : allPerms()) {
      Term<Tet> c = signFolded(Term<Tet>{t.coef, s4Act(pi, relabel(pi, t.tet))});
      for (auto& u : out.terms)
        if (sameTetrahedron(u.tet, c.tet, tol)) {
          u.coef += c.coef;
          merged = true;
          break;
        }
      if (merged) break;
    }
    if (!merged) out.terms.push_back(t);
  }
  std::erase_if(out.terms, [](const Term<Tet>& t) { return t.coef == 0; });
  return out;
}

template <class Tet>
bool equivalentSums(const FormalSum<Tet>& a, const FormalSum<Tet>& b, double tol) {
  return collect(a - b, tol).terms.empty();
}

template <class S>
DSum<S> classOf(const Triangulation& T, const Decoration<S>& D) {
  auto rep = validateDTriangulation(T, D);
  if (!rep.ok()) fail(ErrorKind::InvalidDecoration, "classOf needs a valid D-triangulation");
  DSum<S> out;
  for (int t = 0; t < T.size(); ++t) out.terms.push_back({1, tetrahedron(T, D, t)});
  return out;
}

template <class S>
ISum<S> classOf(const std::vector<IdealTetrahedron<S>>& tets) {
  ISum<S> out;
  for (const auto& t : tets) out.terms.push_back({1, t});
  return out;
}

template <class S>
FiveTermRelation<DecoratedTetrahedron<S>> relationFromTransit(const Triangulation& before,
                                                              const Decoration<S>& D,
                                                              const TransitResult<S>& r) {
  const auto& m = r.move;
  if (m.kind != MoveKind::TwoThree && m.kind != MoveKind::ThreeTwo)
    fail(ErrorKind::InvalidArgument, "only 2-3 and 3-2 moves give five-term relations");
  DSum<S> oldSide, newSide;
  for (int t : m.oldTets) oldSide.terms.push_back({1, tetrahedron(before, D, t)});
  for (int t : m.newTets) newSide.terms.push_back({1, tetrahedron(r.T, r.D, t)});
  FiveTermRelation<DecoratedTetrahedron<S>> rel;
  rel.provenance = m;
  if (m.kind == MoveKind::TwoThree) {
    rel.lhs = oldSide;
    rel.rhs = newSide;
  } else {
    rel.lhs = newSide;
    rel.rhs = oldSide;
  }
  return rel;
}

template <class S>
FiveTermRelation<IdealTetrahedron<S>> relationFromTransit(const std::vector<IdealTetrahedron<S>>& before,
                                                          const IdealTransitResult<S>& r) {
  FiveTermRelation<IdealTetrahedron<S>> rel;
  rel.provenance = r.move;
  for (int t : r.move.oldTets) rel.lhs.terms.push_back({1, before[t]});
  for (int t : r.move.newTets) rel.rhs.terms.push_back({1, r.tets[t]});
  return rel;
}

template <class Tet>
bool differsByRelation(const FormalSum<Tet>& before, const FormalSum<Tet>& after, const FiveTermRelation<Tet>& rel,
                       double tol) {
  // 2->3 trades lhs for rhs, 3->2 the other way round
  FormalSum<Tet> step = rel.provenance.kind == MoveKind::ThreeTwo ? rel.element() : -rel.element();
  return equivalentSums(after - before, step, tol);
}

template <class S>
WitnessReplay<S> replay(const Triangulation& T, const Decoration<S>& D, const EquivalenceWitness& w) {
  WitnessReplay<S> out{T, D, {}, {}, {}};
  out.classes.push_back(classOf(T, D));
  for (const auto& m : w.chain) {
    auto r = applyMove(out.T, out.D, m);
    if (m.kind == MoveKind::TwoThree || m.kind == MoveKind::ThreeTwo)
      out.relations.push_back(relationFromTransit(out.T, out.D, r));
    out.records.push_back(r.move);
    out.T = std::move(r.T);
    out.D = std::move(r.D);
    out.classes.push_back(classOf(out.T, out.D));
  }
  return out;
}

template <class S>
bool verifyWitness(const Triangulation& source, const Decoration<S>& DS, const Triangulation& target,
                   const Decoration<S>& DT, const EquivalenceWitness& w, double tol) {
  auto r = replay(source, DS, w);
  return sameDecorated(r.T, r.D, target, DT, tol);
}

#define QHI_INSTANTIATE_TET(Tet)                                                                    \
  template struct FormalSum<Tet>;                                                                   \
  template FormalSum<Tet> collect(const FormalSum<Tet>&, double);                                   \
  template FormalSum<Tet> normalizeS4(const FormalSum<Tet>&, double);                               \
  template bool equivalentSums(const FormalSum<Tet>&, const FormalSum<Tet>&, double);               \
  template bool differsByRelation(const FormalSum<Tet>&, const FormalSum<Tet>&,                     \
                                  const FiveTermRelation<Tet>&, double);

QHI_INSTANTIATE_TET(DecoratedTetrahedron<Complex>)
QHI_INSTANTIATE_TET(DecoratedTetrahedron<GaussianRational>)
QHI_INSTANTIATE_TET(IdealTetrahedron<Complex>)
QHI_INSTANTIATE_TET(IdealTetrahedron<GaussianRational>)

#define QHI_INSTANTIATE(S)                                                                          \
  template DSum<S> classOf(const Triangulation&, const Decoration<S>&);                            \
  template ISum<S> classOf(const std::vector<IdealTetrahedron<S>>&);                               \
  template FiveTermRelation<DecoratedTetrahedron<S>> relationFromTransit(                          \
      const Triangulation&, const Decoration<S>&, const TransitResult<S>&);                        \
  template FiveTermRelation<IdealTetrahedron<S>> relationFromTransit(                              \
      const std::vector<IdealTetrahedron<S>>&, const IdealTransitResult<S>&);                      \
  template WitnessReplay<S> replay(const Triangulation&, const Decoration<S>&, const EquivalenceWitness&); \
  template bool verifyWitness(const Triangulation&, const Decoration<S>&, const Triangulation&,   \
                              const Decoration<S>&, const EquivalenceWitness&, double);

QHI_INSTANTIATE(Complex)
QHI_INSTANTIATE(GaussianRational)

}  // namespace qhi
