// qhi: command line front end for the library.
#include <CLI11.hpp>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "qhi/asymptotics.hpp"
#include "qhi/errors.hpp"
#include "qhi/io.hpp"

using namespace qhi;

namespace {

void emit(const Json& j, const std::string& out) {
  if (out.empty() || out == "-") std::cout << j.dump(2) << "\n";
  else writeJsonFile(out, j);
}

std::vector<int> parseRange(const std::string& s) {
  // "a:b:step", "a:b" or "a,b,c"
  std::vector<int> out;
  if (s.find(':') != std::string::npos) {
    std::vector<int> parts;
    std::stringstream ss(s);
    for (std::string tok; std::getline(ss, tok, ':');) parts.push_back(std::stoi(tok));
    if (parts.size() < 2 || parts.size() > 3) fail(ErrorKind::InvalidArgument, "range must be a:b or a:b:step");
    int step = parts.size() == 3 ? parts[2] : 2;
    if (step <= 0) fail(ErrorKind::InvalidArgument, "range step must be positive");
    for (int n = parts[0]; n <= parts[1]; n += step) out.push_back(n);
  } else {
    std::stringstream ss(s);
    for (std::string tok; std::getline(ss, tok, ',');) out.push_back(std::stoi(tok));
  }
  return out;
}

MoveSpec parseMove(const std::string& kind, const std::string& site) {
  Json j = {{"move", kind}};
  std::vector<int> v;
  std::stringstream ss(site);
  for (std::string tok; std::getline(ss, tok, ',');) v.push_back(std::stoi(tok));
  MoveSpec m = moveFromJson(j);
  if (m.kind == MoveKind::TwoThree || m.kind == MoveKind::Bubble) {
    if (v.size() != 2) fail(ErrorKind::InvalidArgument, "site for " + kind + " is tet,face");
    m.tet = v[0];
    m.face = v[1];
  } else {
    if (v.size() != 1) fail(ErrorKind::InvalidArgument, "site for " + kind + " is a single id");
    (m.kind == MoveKind::ThreeTwo ? m.edge : m.vertex) = v[0];
  }
  return m;
}

const Decoration<Complex>& needDecoration(const Document& d) {
  if (!d.D) fail(ErrorKind::InvalidArgument, "input has no decoration");
  return *d.D;
}

PlanMethod parsePlan(const std::string& s) {
  if (s == "auto") return PlanMethod::Auto;
  if (s == "greedy") return PlanMethod::Greedy;
  if (s == "exhaustive") return PlanMethod::Exhaustive;
  fail(ErrorKind::InvalidArgument, "plan must be auto, greedy or exhaustive");
}

TensorRoute parseRoute(const std::string& s) {
  if (s == "structured") return TensorRoute::Structured;
  if (s == "dense") return TensorRoute::Dense;
  fail(ErrorKind::InvalidArgument, "route must be structured or dense");
}

Json scaledJson(const ScaledComplex& z) {
  return {{"mantissa", complexJson(z.mantissa)}, {"logScale", z.logScale}, {"logAbs", z.logAbs()},
          {"arg", z.arg()}, {"value", complexJson(z.value())}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum hyperbolic invariants of decorated triangulations"};
  app.require_subcommand(1);

  // transit
  auto* transit = app.add_subcommand("transit", "apply a move, or replay a witness chain");
  std::string tIn, tOut, tMove = "2-3", tSite, tReplay;
  bool tExact = false;
  transit->add_option("input", tIn, "triangulation with decoration")->required()->check(CLI::ExistingFile);
  transit->add_option("-o,--output", tOut, "output file (default stdout)");
  transit->add_option("--move", tMove, "2-3, 3-2, bubble or unbubble");
  transit->add_option("--site", tSite, "tet,face for 2-3 and bubble; edge or vertex id otherwise");
  transit->add_option("--replay", tReplay, "witness file (\"-\" uses the input's own witness)");
  transit->add_flag("--exact", tExact, "work in exact arithmetic when the input is exact");

  // idealize
  auto* idealizeCmd = app.add_subcommand("idealize", "ideal tetrahedra from a decoration");
  std::string iIn, iOut, iCsv;
  idealizeCmd->add_option("input", iIn)->required()->check(CLI::ExistingFile);
  idealizeCmd->add_option("-o,--output", iOut);
  idealizeCmd->add_option("--edges", iCsv, "edge report CSV (edge id, |product-1|)");

  // statesum
  auto* statesum = app.add_subcommand("statesum", "evaluate the state sum at an odd N");
  std::string sIn, sOut, sPlan = "auto", sEmit = "json", sRoute = "structured";
  int sN = 3;
  double sBudget = 1e8;
  statesum->add_option("input", sIn)->required()->check(CLI::ExistingFile);
  statesum->add_option("--N", sN, "odd order of the root of unity");
  statesum->add_option("--plan", sPlan, "auto, greedy or exhaustive");
  statesum->add_option("--route", sRoute, "structured or dense tensor construction");
  statesum->add_option("--budget", sBudget, "largest intermediate tensor allowed");
  statesum->add_option("--emit", sEmit, "comma list of psi, h, k, json");
  statesum->add_option("-o,--output", sOut);

  // volume
  auto* volume = app.add_subcommand("volume", "dilogarithmic invariant of ideal data");
  std::string vIn, vOut, vFlat = "auto", vConv = "neumann";
  volume->add_option("input", vIn)->required()->check(CLI::ExistingFile);
  volume->add_option("--flattening", vFlat, "auto or given");
  volume->add_option("--convention", vConv, "neumann or literal");
  volume->add_option("-o,--output", vOut);

  // asymptotics
  auto* asym = app.add_subcommand("asymptotics", "growth of |K_N| over a range of N");
  std::string aIn, aN = "3:9:2", aEmit = "csv", aOut;
  double aBudget = 1e8;
  asym->add_option("input", aIn)->required()->check(CLI::ExistingFile);
  asym->add_option("--N", aN, "a:b:step or a comma list");
  asym->add_option("--emit", aEmit, "csv or json");
  asym->add_option("--budget", aBudget);
  asym->add_option("-o,--output", aOut);

  // validate
  auto* validate = app.add_subcommand("validate", "check a triangulation and its decoration");
  std::string valIn;
  validate->add_option("input", valIn)->required()->check(CLI::ExistingFile);

  // class
  auto* classCmd = app.add_subcommand("class", "formal sum of the decorated tetrahedra");
  std::string cIn, cOut;
  bool cIdeal = false, cNormalize = false;
  classCmd->add_option("input", cIn)->required()->check(CLI::ExistingFile);
  classCmd->add_flag("--ideal", cIdeal, "sum of idealized tetrahedra");
  classCmd->add_flag("--normalize", cNormalize, "canonical S4 representatives");
  classCmd->add_option("-o,--output", cOut);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*transit) {
      Document d = readDocument(tIn);
      const auto& D = needDecoration(d);
      Json records = Json::array();
      std::vector<MoveSpec> moves;
      if (!tReplay.empty()) {
        EquivalenceWitness w;
        if (tReplay == "-") {
          if (!d.witness) fail(ErrorKind::InvalidArgument, "input carries no witness");
          w = *d.witness;
        } else {
          w = witnessFromJson(readJsonFile(tReplay));
        }
        moves = w.chain;
      } else {
        if (tSite.empty()) fail(ErrorKind::InvalidArgument, "--site is required without --replay");
        moves.push_back(parseMove(tMove, tSite));
      }
      Document out;
      out.name = d.name;
      if (tExact && d.exact) {
        auto r = replay(d.T, *d.exact, EquivalenceWitness{moves});
        for (const auto& rec : r.records) records.push_back(toJson(rec));
        out.T = r.T;
        out.exact = r.D;
        out.D = toComplex(r.D);
      } else {
        auto r = replay(d.T, D, EquivalenceWitness{moves});
        for (const auto& rec : r.records) records.push_back(toJson(rec));
        out.T = r.T;
        out.D = r.D;
      }
      emit(toJson(out), tOut);
      std::cerr << records.dump() << "\n";
    } else if (*idealizeCmd) {
      Document d = readDocument(iIn);
      auto tets = idealizeTriangulation(d.T, needDecoration(d));
      Document out;
      out.T = d.T;
      out.name = d.name;
      out.ideal = tets;
      emit(toJson(out), iOut);
      if (!iCsv.empty()) {
        auto rep = edgeProducts(d.T, tets);
        std::ofstream csv(iCsv);
        csv << "edge,deviation\n" << std::setprecision(17);
        for (size_t s = 0; s < rep.products.size(); ++s) csv << s << "," << std::abs(rep.products[s] - 1.0) << "\n";
      }
    } else if (*statesum) {
      Document d = readDocument(sIn);
      StateSumOptions opt;
      opt.method = parsePlan(sPlan);
      opt.route = parseRoute(sRoute);
      opt.budget = sBudget;
      RootSystem R = RootSystem::make(sN);
      auto r = evaluate(d.T, needDecoration(d), R, opt);
      std::stringstream want(sEmit);
      Json j = Json::object();
      bool asJson = false;
      for (std::string tok; std::getline(want, tok, ',');) {
        if (tok == "psi") j["psi"] = scaledJson(r.psi);
        else if (tok == "h") j["h"] = scaledJson(r.h);
        else if (tok == "k") j["k"] = scaledJson(r.k);
        else if (tok == "json") asJson = true;
        else fail(ErrorKind::InvalidArgument, "unknown emit item " + tok);
      }
      if (asJson) {
        j["psi"] = scaledJson(r.psi);
        j["h"] = scaledJson(r.h);
        j["k"] = scaledJson(r.k);
        j["N"] = r.N;
        j["rootChoice"] = {{"omega", complexJson(R.omega())}, {"cut", R.cut}};
        j["plan"] = toJson(r.plan);
        j["timings"] = {{"seconds", r.seconds}};
        j["vertices"] = r.vertices;
      }
      emit(j, sOut);
    } else if (*volume) {
      Document d = readDocument(vIn);
      std::vector<IdealTetrahedron<Complex>> tets;
      if (d.ideal) tets = *d.ideal;
      else tets = idealizeTriangulation(d.T, needDecoration(d));
      std::vector<std::array<long long, 2>> pq;
      if (vFlat == "auto") pq = solveFlattening(d.T, tets).pq;
      else if (vFlat == "given") {
        if (!d.flattening) fail(ErrorKind::InvalidArgument, "input has no flattening");
        pq = *d.flattening;
      } else {
        fail(ErrorKind::InvalidArgument, "flattening must be auto or given");
      }
      auto rep = volumeReport(tets, pq);
      Json j = toJson(rep);
      if (vConv == "literal")
        j["literal"] = complexJson(dilogInvariant(tets, pq, RogersConvention::Literal).reduced());
      emit(j, vOut);
    } else if (*asym) {
      Document d = readDocument(aIn);
      StateSumOptions opt;
      opt.budget = aBudget;
      auto Ns = parseRange(aN);
      std::vector<GrowthSample> samples;
      std::ostringstream csv;
      csv << "N,ReK,ImK,logAbsK,slope\n" << std::setprecision(12);
      for (int N : Ns) {
        auto r = evaluate(d.T, needDecoration(d), RootSystem::make(N), opt);
        samples.push_back({N, r.k.logAbs(), r.psi.logAbs(), r.k});
        Complex k = r.k.value();
        csv << N << "," << k.real() << "," << k.imag() << "," << r.k.logAbs() << ",";
        if (samples.size() >= 2) csv << fitGrowth(samples).slope;
        csv << "\n";
      }
      if (aEmit == "csv") {
        if (aOut.empty()) std::cout << csv.str();
        else std::ofstream(aOut) << csv.str();
      } else {
        auto fit = fitGrowth(samples);
        emit({{"slope", fit.slope}, {"slopeError", fit.slopeError}, {"psiSlope", fit.psiSlope},
              {"psiSlopeError", fit.psiSlopeError}, {"residuals", fit.residuals}, {"N", Ns}},
             aOut);
      }
    } else if (*validate) {
      Document d = readDocument(valIn);
      Json j = {{"tetrahedra", d.T.size()}, {"vertices", d.T.numVertices()}, {"edges", d.T.numEdges()},
                {"fullable", d.T.isFullable()}};
      auto hr = validateHamiltonian(d.T, d.T.hamiltonianIds());
      j["hamiltonian"] = {{"valid", hr.valid}, {"components", hr.components}, {"problems", hr.problems}};
      bool ok = true;
      if (d.D) {
        auto rep = validateDTriangulation(d.T, *d.D);
        Json items = Json::array();
        for (int i = 1; i <= 7; ++i) items.push_back(rep.item[i]);
        j["conditions"] = items;
        j["full"] = rep.full;
        j["messages"] = rep.messages;
        j["valid"] = rep.ok();
        ok = rep.ok();
      }
      if (d.ideal) j["edgeDeviation"] = edgeProducts(d.T, *d.ideal).maxDeviation;
      std::cout << j.dump(2) << "\n";
      return ok ? 0 : 1;
    } else if (*classCmd) {
      Document d = readDocument(cIn);
      if (cIdeal) {
        auto s = classOf(d.ideal ? *d.ideal : idealizeTriangulation(d.T, needDecoration(d)));
        emit(toJson(cNormalize ? normalizeS4(s) : s), cOut);
      } else {
        auto s = classOf(d.T, needDecoration(d));
        emit(toJson(cNormalize ? normalizeS4(s) : s), cOut);
      }
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
