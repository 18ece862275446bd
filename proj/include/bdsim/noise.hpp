#pragma once

#include <array>
#include <cstdint>

#include "bdsim/linalg.hpp"

namespace bdsim {

// Counter-mode bijection; identical inputs give identical words on every
// platform and call order.
std::array<uint32_t, 4> counter_block(const std::array<uint32_t, 4>& counter,
                                      const std::array<uint32_t, 2>& key);

// Stateless gaussian stream addressed by (path, step, channel). Consecutive
// even/odd channels share one counter block.
class NoiseSource {
 public:
  explicit NoiseSource(uint64_t seed) : seed_(seed) {}

  double normal(uint64_t path, uint64_t step, uint32_t channel) const;
  VecA normals(uint64_t path, uint64_t step, int count, uint32_t first_channel = 0) const;
  uint64_t seed() const { return seed_; }

 private:
  uint64_t seed_;
};

}  // namespace bdsim
