// Writes the shipped instance files. Run from the repository root (or pass a
// target directory) after changing any builder in src/instance.cpp.
#include <cstdio>
#include <fstream>
#include <string>

#include "bdsim/instance.hpp"

int main(int argc, char** argv) {
  std::string dir = argc > 1 ? argv[1] : std::string(BDSIM_SOURCE_DIR) + "/instances";
  const struct {
    const char* name;
    bdsim::Sections (*make)();
  } entries[] = {
      {"su2_coset", bdsim::su2_coset_sections},
      {"flat_const", bdsim::flat_const_sections},
      {"hopf", bdsim::hopf_sections},
  };
  for (const auto& e : entries) {
    std::string path = dir + "/" + e.name + ".ini";
    std::ofstream f(path, std::ios::binary);
    if (!f) {
      std::fprintf(stderr, "cannot write %s\n", path.c_str());
      return 2;
    }
    f << bdsim::dump_ini(e.make());
    std::printf("wrote %s\n", path.c_str());
  }
  return 0;
}
