#include "doctest.h"

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <memory>

#include "qhi/errors.hpp"
#include "qhi/examples.hpp"

using namespace qhi;

namespace {

const std::string kData = QHI_DATA_DIR;

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args) {
  std::string cmd = std::string(QHI_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf;
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string data(const std::string& name) { return kData + "/" + name + ".json"; }

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "qhi_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("bundled files match the generator") {
  for (const auto& name : exampleNames()) {
    Document fromFile = readDocument(data(name));
    Document built = example(name);
    CHECK_MESSAGE(toJson(fromFile) == toJson(built), name);
  }
}

TEST_CASE("documents round trip through JSON") {
  for (const auto& name : exampleNames()) {
    Document d = example(name);
    Json j = toJson(d);
    CHECK(toJson(documentFromJson(j)) == j);
  }
  Document e = readDocument(data("double_tetrahedron_exact"));
  REQUIRE(e.exact);
  CHECK(validateDTriangulation(e.T, *e.exact).ok());
}

TEST_CASE("malformed input is a parse error") {
  Json bad = Json::parse(R"({"tetrahedra": 1, "pairings": [{"src": [0, 0]}]})");
  CHECK_THROWS_AS(documentFromJson(bad), Error);
}

TEST_CASE("validate") {
  auto r = run("validate " + data("simplex_boundary"));
  CHECK(r.status == 0);
  auto j = Json::parse(r.out);
  CHECK(j["valid"] == true);
  CHECK(j["tetrahedra"] == 5);
  auto f = Json::parse(run("validate " + data("figure_eight")).out);
  CHECK(f["fullable"] == false);
  CHECK(f["edgeDeviation"].get<double>() < 1e-12);

  // a charge off by one breaks the edge sums
  Json broken = readJsonFile(data("simplex_boundary"));
  auto& c = broken["decoration"]["c"];
  c[c.begin().key()] = c.begin()->get<int>() + 1;
  auto path = (std::filesystem::temp_directory_path() / "qhi_broken.json").string();
  writeJsonFile(path, broken);
  CHECK(run("validate " + path).status == 1);
  std::filesystem::remove(path);
}

TEST_CASE("statesum") {
  auto r = run("statesum " + data("simplex_boundary") + " --N 3 --emit json");
  REQUIRE(r.status == 0);
  auto j = Json::parse(r.out);
  Complex k = complexFromJson(j["k"]["value"]);
  CHECK(std::abs(k - std::pow(3.0, -6)) < 1e-10);
  CHECK(j["plan"]["cost"].get<double>() <= j["plan"]["naiveCost"].get<double>());
  CHECK(run("statesum " + data("simplex_boundary") + " --N 4").status == 2);
}

TEST_CASE("transit and replay") {
  auto out = scratch("moved.json");
  auto r = run("transit " + data("simplex_boundary") + " --replay - -o " + out.string());
  REQUIRE(r.status == 0);
  Document moved = readDocument(out.string());
  Document target = readDocument(data("simplex_boundary_target"));
  CHECK(sameDecorated(moved.T, *moved.D, target.T, *target.D));

  auto one = scratch("one.json");
  REQUIRE(run("transit " + data("simplex_boundary") + " --move 2-3 --site 0,1 -o " + one.string()).status == 0);
  CHECK(readDocument(one.string()).T.size() == 6);
  CHECK(run("transit " + data("simplex_boundary") + " --move 3-2 --site 0").status == 2);
}

TEST_CASE("idealize and volume") {
  auto csv = scratch("edges.csv");
  auto r = run("idealize " + data("lens_4_1") + " --edges " + csv.string());
  REQUIRE(r.status == 0);
  auto j = Json::parse(r.out);
  CHECK(j.contains("ideal"));
  CHECK(std::filesystem::file_size(csv) > 0);

  auto v = run("volume " + data("figure_eight"));
  REQUIRE(v.status == 0);
  auto vj = Json::parse(v.out);
  CHECK(std::abs(vj["volume"].get<double>() - 2.029883212819) < 1e-9);
}

TEST_CASE("asymptotics csv") {
  auto r = run("asymptotics " + data("double_tetrahedron") + " --N 3:7:2");
  REQUIRE(r.status == 0);
  CHECK(r.out.rfind("N,ReK,ImK,logAbsK,slope", 0) == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 4);
}

TEST_CASE("class") {
  auto r = run("class " + data("double_tetrahedron") + " --normalize");
  REQUIRE(r.status == 0);
  auto j = Json::parse(r.out);
  CHECK(j["kind"] == "D");
  CHECK(j["terms"].size() <= 2);
  auto i = run("class " + data("figure_eight") + " --ideal");
  REQUIRE(i.status == 0);
  CHECK(Json::parse(i.out)["terms"].size() == 2);
}
