#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "bdsim/estimator.hpp"

namespace bdsim {

// INI-style configuration tree. Keys may repeat inside a section (structure
// constants, matrix rows, coefficient entries), and sections named "irrep"
// may repeat at top level.
struct KeyValue {
  std::string key;
  std::string value;
  bool operator==(const KeyValue& o) const { return key == o.key && value == o.value; }
};

struct Section {
  std::string name;
  std::vector<KeyValue> entries;
  bool operator==(const Section& o) const { return name == o.name && entries == o.entries; }
};

using Sections = std::vector<Section>;

// '#' starts a comment anywhere in a line. Keys and values are trimmed;
// values keep interior spaces so expressions survive round trips.
Sections parse_ini(std::istream& is);
std::string dump_ini(const Sections& sections);

// Fully wired runnable configuration. The algebra is shared-owned so the
// raw pointers inside model stay valid across copies and moves.
struct InstanceConfig {
  std::string name;
  std::shared_ptr<LieAlgebraSpec> spec;
  BundleModel model;
  Observable observable;
  SimulationParams params;
  Vec x0;
};

InstanceConfig realize(const Sections& sections);
InstanceConfig load_instance(const std::string& path);

std::string read_file(const std::string& path);
// FNV-1a 64-bit of the raw bytes, sixteen hex digits
std::string fnv1a_hex(const std::string& bytes);

// Shipped configurations; instances/*.ini hold exactly dump_ini of these.
Sections su2_coset_sections();
Sections flat_const_sections();
Sections hopf_sections();

}  // namespace bdsim
