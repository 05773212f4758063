#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qhi/dilog.hpp"
#include "qhi/ideal.hpp"
#include "qhi/scissors.hpp"
#include "qhi/statesum.hpp"
#include "qhi/transit.hpp"

namespace qhi {

using Json = nlohmann::json;

// {"tetrahedra": k, "pairings": [{"src":[t,f], "dst":[t,f], "map":[a,b,c]}], "hamiltonian": [...]}
// plus an optional "orientation" (+1/-1 for tetrahedron 0). Every face pair is listed once.
Json toJson(const Triangulation& T);
Triangulation triangulationFromJson(const Json& j);

// {"z": {"<edge>": {"t":[re,im], "x":[re,im]}}, "c": {"<6*tet+edge>": n}, "b": {"<tet>": [v0..v3]},
//  "sign": {"<tet>": +-1}}. Missing signs default to the orientation signs.
Json toJson(const Decoration<Complex>& D);
Json toJson(const Decoration<GaussianRational>& D);
Decoration<Complex> decorationFromJson(const Triangulation& T, const Json& j);
// Parts may be integers or "p/q" strings.
Decoration<GaussianRational> exactDecorationFromJson(const Triangulation& T, const Json& j);
bool isExactDecoration(const Json& j);

Json toJson(const IdealTetrahedron<Complex>& t);
IdealTetrahedron<Complex> idealFromJson(const Json& j);

Json toJson(const MoveSpec& m);
MoveSpec moveFromJson(const Json& j);
Json toJson(const EquivalenceWitness& w);
EquivalenceWitness witnessFromJson(const Json& j);
Json toJson(const MoveRecord& r);

Json toJson(const DSum<Complex>& s);
Json toJson(const ISum<Complex>& s);

Json toJson(const ContractionPlan& p);
Json toJson(const VolumeReport& r);

// One file may carry a triangulation, a decoration, ideal moduli with a flattening and a witness.
struct Document {
  Triangulation T;
  std::optional<Decoration<Complex>> D;
  std::optional<Decoration<GaussianRational>> exact;
  std::optional<std::vector<IdealTetrahedron<Complex>>> ideal;
  std::optional<std::vector<std::array<long long, 2>>> flattening;
  std::optional<EquivalenceWitness> witness;
  std::string name;
};

Document documentFromJson(const Json& j);
Json toJson(const Document& d);

Json readJsonFile(const std::string& path);
void writeJsonFile(const std::string& path, const Json& j);
Document readDocument(const std::string& path);

Json complexJson(Complex z);
Complex complexFromJson(const Json& j);

}  // namespace qhi
