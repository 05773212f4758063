#include "qhi/statesum.hpp"

#include <chrono>
#include <cmath>
#include <map>

#include "qhi/errors.hpp"

namespace qhi {

std::vector<std::vector<int>> networkLegs(const Triangulation& T, const std::vector<Branching>& b) {
  std::vector<std::vector<int>> legs(T.size());
  for (int t = 0; t < T.size(); ++t)
    for (int k = 0; k < 4; ++k) legs[t].push_back(T.faceClass(t, b[t].order[k]));
  return legs;
}

std::vector<StateTensor> stateTensors(const Triangulation& T, const Decoration<Complex>& D, const RootSystem& R,
                                      TensorRoute route) {
  std::vector<StateTensor> out;
  for (int t = 0; t < T.size(); ++t) out.push_back(buildStateTensor(tetrahedron(T, D, t), R, route));
  return out;
}

ContractionPlan planStateSum(const Triangulation& T, const std::vector<Branching>& b, int N, double budget,
                             PlanMethod method) {
  return planContraction(networkLegs(T, b), N, budget, method);
}

ScaledComplex stateWeight(const Triangulation& T, const Decoration<Complex>& D, const RootSystem& R) {
  const int N = R.N;
  Complex lg = -static_cast<double>(T.numVertices()) * std::log(static_cast<double>(N));
  for (int s = 0; s < T.numEdges(); ++s)
    if (!T.inHamiltonian(s)) lg += static_cast<double>(N - 1) / N * R.log(D.z[s].x);
  return ScaledComplex{std::polar(1.0, lg.imag()), lg.real()};
}

StateSumResult evaluate(const Triangulation& T, const Decoration<Complex>& D, const RootSystem& R,
                        const StateSumOptions& opt) {
  auto start = std::chrono::steady_clock::now();
  RootSystem::make(R.N, R.cut);
  StateSumResult r;
  r.N = R.N;
  r.roots = R;
  r.vertices = T.numVertices();
  r.plan = planStateSum(T, D.b, R.N, opt.budget, opt.method);
  auto legs = networkLegs(T, D.b);
  std::vector<Tensor> ts;
  for (int t = 0; t < T.size(); ++t) {
    StateTensor st = buildStateTensor(tetrahedron(T, D, t), R, opt.route);
    ts.push_back(Tensor{legs[t], std::move(st.data), 0});
  }
  r.psi = contract(std::move(ts), r.plan);
  r.weight = stateWeight(T, D, R);
  r.h = r.psi * r.weight;
  r.k = r.h.pow(R.N);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

ScaledComplex evaluateNaive(const Triangulation& T, const Decoration<Complex>& D, const RootSystem& R) {
  const int N = R.N;
  auto tensors = stateTensors(T, D, R, TensorRoute::Structured);
  auto legs = networkLegs(T, D.b);
  const int F = T.numFaces();
  std::vector<int> state(F, 0);
  Complex sum = 0;
  for (;;) {
    Complex prod = 1;
    for (int t = 0; t < T.size() && prod != Complex(0); ++t)
      prod *= tensors[t](state[legs[t][0]], state[legs[t][1]], state[legs[t][2]], state[legs[t][3]]);
    sum += prod;
    int f = F - 1;
    while (f >= 0 && ++state[f] == N) state[f--] = 0;
    if (f < 0) break;
  }
  return ScaledComplex::from(sum);
}

std::vector<AugmentedTetrahedron> augment(const Triangulation& T, const Decoration<Complex>& D) {
  std::vector<AugmentedTetrahedron> out;
  for (int t = 0; t < T.size(); ++t) {
    AugmentedTetrahedron a;
    a.d = tetrahedron(T, D, t);
    for (int v = 0; v < 4; ++v) {
      a.vertexLabel[v] = T.vertexClass(t, v);
      a.v0[v] = static_cast<int>(T.vertexPreimages(a.vertexLabel[v]).size());
      a.faceLabel[v] = T.faceClass(t, v);
      a.v2[v] = static_cast<int>(T.facePreimages(a.faceLabel[v]).size());
    }
    for (int e = 0; e < 6; ++e) {
      a.edgeLabel[e] = T.edgeClass(t, e);
      a.v1[e] = static_cast<int>(T.edgePreimages(a.edgeLabel[e]).size());
      a.inH[e] = T.inHamiltonian(a.edgeLabel[e]);
    }
    out.push_back(a);
  }
  return out;
}

ScaledComplex phiFactor(const AugmentedTetrahedron& a, int N) {
  double lg = 0;
  for (int v = 0; v < 4; ++v) lg -= std::log(static_cast<double>(N)) / a.v0[v];
  return ScaledComplex{1, lg};
}

ScaledComplex omegaFactor(const AugmentedTetrahedron& a, const RootSystem& R) {
  const int N = R.N;
  Complex lg = 0;
  for (int e = 0; e < 6; ++e) {
    if (a.inH[e]) continue;
    int i = a.d.b.rank[kEdgeVertex[e][0]], j = a.d.b.rank[kEdgeVertex[e][1]];
    lg += static_cast<double>(N - 1) / (static_cast<double>(a.v1[e]) * N) * R.log(a.d.zAt(std::min(i, j), std::max(i, j)).x);
  }
  return ScaledComplex{std::polar(1.0, lg.imag()), lg.real()};
}

ScaledComplex evaluateAugmented(const std::vector<AugmentedTetrahedron>& terms, const RootSystem& R,
                                const StateSumOptions& opt) {
  std::map<int, int> vc, ec, fc;
  for (const auto& a : terms) {
    for (int v = 0; v < 4; ++v) {
      ++vc[a.vertexLabel[v]];
      ++fc[a.faceLabel[v]];
    }
    for (int e = 0; e < 6; ++e) ++ec[a.edgeLabel[e]];
  }
  for (const auto& a : terms) {
    for (int v = 0; v < 4; ++v) {
      if (a.v0[v] != vc[a.vertexLabel[v]]) fail(ErrorKind::MultiplicityMismatch, "vertex multiplicity");
      if (a.v2[v] != 2 || fc[a.faceLabel[v]] != 2) fail(ErrorKind::MultiplicityMismatch, "face multiplicity");
    }
    for (int e = 0; e < 6; ++e)
      if (a.v1[e] != ec[a.edgeLabel[e]]) fail(ErrorKind::MultiplicityMismatch, "edge multiplicity");
  }
  std::vector<std::vector<int>> legs;
  std::vector<Tensor> ts;
  for (const auto& a : terms) {
    StateTensor st = buildStateTensor(a.d, R, opt.route);
    ScaledComplex f = phiFactor(a, R.N) * omegaFactor(a, R);
    std::vector<int> l;
    for (int k = 0; k < 4; ++k) l.push_back(a.faceLabel[a.d.b.order[k]]);
    for (auto& x : st.data) x *= f.mantissa;
    legs.push_back(l);
    ts.push_back(Tensor{l, std::move(st.data), f.logScale});
  }
  auto plan = planContraction(legs, R.N, opt.budget, opt.method);
  return contract(std::move(ts), plan);
}

}  // namespace qhi
