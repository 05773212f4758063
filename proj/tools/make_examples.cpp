// Regenerates the bundled data files: make_examples <dir>
#include <filesystem>
#include <iostream>

#include "qhi/errors.hpp"
#include "qhi/examples.hpp"

using namespace qhi;

int main(int argc, char** argv) {
  std::filesystem::path dir = argc > 1 ? argv[1] : "data";
  std::filesystem::create_directories(dir);
  try {
    for (const auto& name : exampleNames()) {
      Document d = example(name);
      writeJsonFile((dir / (name + ".json")).string(), toJson(d));
      if (d.witness) {
        writeJsonFile((dir / (name + "_witness.json")).string(), toJson(*d.witness));
        auto r = replay(d.T, *d.D, *d.witness);
        Document target;
        target.name = name + "_target";
        target.T = r.T;
        target.D = r.D;
        writeJsonFile((dir / (name + "_target.json")).string(), toJson(target));
      }
      std::cout << name << ": " << d.T.size() << " tetrahedra\n";
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
