#include "qhi/io.hpp"

#include <fstream>
#include <sstream>

#include "qhi/errors.hpp"

namespace qhi {

namespace {

template <class F>
auto parsing(const std::string& what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    fail(ErrorKind::ParseError, what + ": " + e.what());
  }
}

Rational rationalFromJson(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_string()) return Rational(j.get<std::string>());
  fail(ErrorKind::ParseError, "exact values must be integers or \"p/q\" strings");
}

std::string rationalString(const Rational& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

Json gaussianJson(const GaussianRational& z) { return Json::array({rationalString(z.re), rationalString(z.im)}); }

GaussianRational gaussianFromJson(const Json& j) {
  if (!j.is_array() || j.size() != 2) fail(ErrorKind::ParseError, "expected [re, im]");
  return {rationalFromJson(j[0]), rationalFromJson(j[1])};
}

Json valueJson(const Complex& z) { return complexJson(z); }
Json valueJson(const GaussianRational& z) { return gaussianJson(z); }

template <class S>
Json decorationJson(const Decoration<S>& D) {
  Json z = Json::object(), c = Json::object(), b = Json::object(), sign = Json::object();
  for (size_t s = 0; s < D.z.size(); ++s) z[std::to_string(s)] = {{"t", valueJson(D.z[s].t)}, {"x", valueJson(D.z[s].x)}};
  for (size_t t = 0; t < D.b.size(); ++t) {
    auto key = std::to_string(t);
    b[key] = D.b[t].order;
    sign[key] = D.sign[t];
    for (int e = 0; e < 6; ++e) c[std::to_string(6 * t + e)] = D.c[t][e];
  }
  return {{"z", z}, {"c", c}, {"b", b}, {"sign", sign}};
}

template <class S, class Value>
Decoration<S> decorationFrom(const Triangulation& T, const Json& j, Value value) {
  return parsing("decoration", [&] {
    Decoration<S> D;
    D.b.assign(T.size(), Branching::identity());
    D.c.assign(T.size(), std::array<int, 6>{});
    D.z.assign(T.numEdges(), Borel<S>{});
    if (j.contains("b"))
      for (auto& [k, v] : j.at("b").items()) {
        int t = std::stoi(k);
        if (t < 0 || t >= T.size()) fail(ErrorKind::ParseError, "branching for unknown tetrahedron " + k);
        D.b[t] = Branching::fromOrder(v.template get<Perm4>());
      }
    std::vector<bool> seen(T.numEdges(), false);
    for (auto& [k, v] : j.at("z").items()) {
      int s = std::stoi(k);
      if (s < 0 || s >= T.numEdges()) fail(ErrorKind::ParseError, "cocycle value for unknown edge " + k);
      D.z[s] = {value(v.at("t")), value(v.at("x"))};
      seen[s] = true;
    }
    for (int s = 0; s < T.numEdges(); ++s)
      if (!seen[s]) fail(ErrorKind::ParseError, "no cocycle value for edge " + std::to_string(s));
    if (j.contains("c"))
      for (auto& [k, v] : j.at("c").items()) {
        // "6*tet+edge", or "tet.edge"
        auto dot = k.find('.');
        int t, e;
        if (dot == std::string::npos) {
          int key = std::stoi(k);
          t = key / 6;
          e = key % 6;
        } else {
          t = std::stoi(k.substr(0, dot));
          e = std::stoi(k.substr(dot + 1));
        }
        if (t < 0 || t >= T.size() || e < 0 || e >= 6) fail(ErrorKind::ParseError, "bad charge key " + k);
        D.c[t][e] = v.template get<int>();
      }
    D.sign = orientationSigns(T, D.b);
    if (j.contains("sign"))
      for (auto& [k, v] : j.at("sign").items()) D.sign.at(std::stoi(k)) = v.template get<int>();
    return D;
  });
}

const char* moveKey(MoveKind k) {
  switch (k) {
    case MoveKind::TwoThree: return "2-3";
    case MoveKind::ThreeTwo: return "3-2";
    case MoveKind::Bubble: return "bubble";
    case MoveKind::Unbubble: return "unbubble";
  }
  return "?";
}

}  // namespace

Json complexJson(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complexFromJson(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) fail(ErrorKind::ParseError, "expected [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

Json toJson(const Triangulation& T) {
  Json ps = Json::array();
  for (const auto& p : T.pairings())
    ps.push_back({{"src", {p.srcTet, p.srcFace}}, {"dst", {p.dstTet, p.dstFace}}, {"map", p.map}});
  return {{"tetrahedra", T.size()}, {"pairings", ps}, {"hamiltonian", T.hamiltonianIds()},
          {"orientation", T.orientation0()}};
}

Triangulation triangulationFromJson(const Json& j) {
  int n = 0;
  std::vector<FacePairing> ps;
  std::vector<int> H;
  int orientation = 1;
  parsing("triangulation", [&] {
    n = j.at("tetrahedra").get<int>();
    for (const auto& p : j.at("pairings")) {
      FacePairing f;
      f.srcTet = p.at("src").at(0).get<int>();
      f.srcFace = p.at("src").at(1).get<int>();
      f.dstTet = p.at("dst").at(0).get<int>();
      f.dstFace = p.at("dst").at(1).get<int>();
      f.map = p.at("map").get<std::array<int, 3>>();
      ps.push_back(f);
    }
    if (j.contains("hamiltonian")) H = j.at("hamiltonian").get<std::vector<int>>();
    if (j.contains("orientation")) orientation = j.at("orientation").get<int>();
    return 0;
  });
  return Triangulation::build(n, ps, H, orientation);
}

Json toJson(const Decoration<Complex>& D) { return decorationJson(D); }
Json toJson(const Decoration<GaussianRational>& D) { return decorationJson(D); }

Decoration<Complex> decorationFromJson(const Triangulation& T, const Json& j) {
  return decorationFrom<Complex>(T, j, [](const Json& v) { return complexFromJson(v); });
}

Decoration<GaussianRational> exactDecorationFromJson(const Triangulation& T, const Json& j) {
  return decorationFrom<GaussianRational>(T, j, [](const Json& v) { return gaussianFromJson(v); });
}

bool isExactDecoration(const Json& j) {
  if (!j.contains("z") || j.at("z").empty()) return false;
  const Json& first = j.at("z").begin().value().at("x");
  return first.is_array() && first.size() == 2 && (first[0].is_string() || first[1].is_string());
}

Json toJson(const IdealTetrahedron<Complex>& t) {
  return {{"sign", t.sign},
          {"order", t.b.order},
          {"w", {complexJson(t.w.w0), complexJson(t.w.w1), complexJson(t.w.w2)}},
          {"c", t.c}};
}

IdealTetrahedron<Complex> idealFromJson(const Json& j) {
  return parsing("ideal tetrahedron", [&] {
    IdealTetrahedron<Complex> t;
    t.sign = j.value("sign", 1);
    if (j.contains("order")) t.b = Branching::fromOrder(j.at("order").get<Perm4>());
    const Json& w = j.at("w");
    // a lone modulus is completed to the triple
    t.w = w.size() == 3 && w[0].is_array() ? ModularTriple<Complex>{complexFromJson(w[0]), complexFromJson(w[1]),
                                                                      complexFromJson(w[2])}
                                           : completeTriple(complexFromJson(w));
    if (j.contains("c")) t.c = j.at("c").get<std::array<int, 6>>();
    return t;
  });
}

Json toJson(const MoveSpec& m) {
  Json j = {{"move", moveKey(m.kind)}};
  switch (m.kind) {
    case MoveKind::TwoThree:
    case MoveKind::Bubble:
      j["tet"] = m.tet;
      j["face"] = m.face;
      break;
    case MoveKind::ThreeTwo: j["edge"] = m.edge; break;
    case MoveKind::Unbubble: j["vertex"] = m.vertex; break;
  }
  return j;
}

MoveSpec moveFromJson(const Json& j) {
  return parsing("move", [&] {
    MoveSpec m;
    auto k = j.at("move").get<std::string>();
    if (k == "2-3") m.kind = MoveKind::TwoThree;
    else if (k == "3-2") m.kind = MoveKind::ThreeTwo;
    else if (k == "bubble") m.kind = MoveKind::Bubble;
    else if (k == "unbubble") m.kind = MoveKind::Unbubble;
    else fail(ErrorKind::ParseError, "unknown move " + k);
    m.tet = j.value("tet", -1);
    m.face = j.value("face", -1);
    m.edge = j.value("edge", -1);
    m.vertex = j.value("vertex", -1);
    return m;
  });
}

Json toJson(const EquivalenceWitness& w) {
  Json moves = Json::array();
  for (const auto& m : w.chain) moves.push_back(toJson(m));
  return {{"moves", moves}};
}

EquivalenceWitness witnessFromJson(const Json& j) {
  EquivalenceWitness w;
  const Json& moves = j.is_array() ? j : j.at("moves");
  for (const auto& m : moves) w.chain.push_back(moveFromJson(m));
  return w;
}

Json toJson(const MoveRecord& r) {
  Json j = {{"move", moveKey(r.kind)}, {"oldTets", r.oldTets}, {"newTets", r.newTets},
            {"tetMap", r.tetMap},     {"edgeMap", r.edgeMap}, {"vertexMap", r.vertexMap}};
  if (r.kind == MoveKind::TwoThree || r.kind == MoveKind::ThreeTwo) {
    j["positions"] = {r.posLow, r.posHigh};
    j["osign"] = r.osign;
    j["admissible"] = r.admissible;
    j["edge"] = r.edge;
    j["theta"] = r.theta;
    j["alpha"] = r.alpha;
    j["beta"] = r.beta;
  } else {
    j["vertex"] = r.vertex;
  }
  return j;
}

Json toJson(const DSum<Complex>& s) {
  Json terms = Json::array();
  for (const auto& t : s.terms) {
    Json z = Json::array();
    for (const auto& v : t.tet.z) z.push_back({{"t", complexJson(v.t)}, {"x", complexJson(v.x)}});
    terms.push_back({{"coef", t.coef}, {"sign", t.tet.sign}, {"order", t.tet.b.order}, {"z", z}, {"c", t.tet.c}});
  }
  return {{"kind", "D"}, {"terms", terms}};
}

Json toJson(const ISum<Complex>& s) {
  Json terms = Json::array();
  for (const auto& t : s.terms) {
    Json j = toJson(t.tet);
    j["coef"] = t.coef;
    terms.push_back(j);
  }
  return {{"kind", "I"}, {"terms", terms}};
}

Json toJson(const ContractionPlan& p) {
  Json steps = Json::array();
  for (const auto& s : p.steps) steps.push_back({{"left", s.left}, {"right", s.right}, {"cost", s.cost}});
  return {{"method", p.method}, {"cost", p.cost}, {"naiveCost", p.naiveCost}, {"largest", p.largest},
          {"steps", steps}};
}

Json toJson(const VolumeReport& r) {
  Json fl = Json::array();
  for (auto pq : r.flattening) fl.push_back({pq[0], pq[1]});
  return {{"perTet", r.perTet},
          {"volume", r.total},
          {"cs", r.cs},
          {"invariant", complexJson(r.invariant.value)},
          {"reduced", complexJson(r.invariant.reduced())},
          {"flattening", fl}};
}

Document documentFromJson(const Json& j) {
  Document d;
  d.T = triangulationFromJson(j);
  d.name = j.value("name", "");
  if (j.contains("decoration")) {
    const Json& dj = j.at("decoration");
    if (isExactDecoration(dj)) {
      d.exact = exactDecorationFromJson(d.T, dj);
      d.D = toComplex(*d.exact);
    } else {
      d.D = decorationFromJson(d.T, dj);
    }
  }
  if (j.contains("ideal")) {
    std::vector<IdealTetrahedron<Complex>> tets;
    for (const auto& t : j.at("ideal")) tets.push_back(idealFromJson(t));
    if (static_cast<int>(tets.size()) != d.T.size())
      fail(ErrorKind::ParseError, "ideal data must list one tetrahedron per tetrahedron");
    d.ideal = tets;
  }
  if (j.contains("flattening"))
    d.flattening = parsing("flattening", [&] { return j.at("flattening").get<std::vector<std::array<long long, 2>>>(); });
  if (j.contains("witness")) d.witness = witnessFromJson(j.at("witness"));
  return d;
}

Json toJson(const Document& d) {
  Json j = toJson(d.T);
  if (!d.name.empty()) j["name"] = d.name;
  if (d.exact) j["decoration"] = toJson(*d.exact);
  else if (d.D) j["decoration"] = toJson(*d.D);
  if (d.ideal) {
    Json a = Json::array();
    for (const auto& t : *d.ideal) a.push_back(toJson(t));
    j["ideal"] = a;
  }
  if (d.flattening) j["flattening"] = *d.flattening;
  if (d.witness) j["witness"] = toJson(*d.witness);
  return j;
}

Json readJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::ParseError, "cannot open " + path);
  return parsing(path, [&] { return Json::parse(in); });
}

void writeJsonFile(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::InvalidArgument, "cannot write " + path);
  out << j.dump(2) << "\n";
}

Document readDocument(const std::string& path) { return documentFromJson(readJsonFile(path)); }

}  // namespace qhi
