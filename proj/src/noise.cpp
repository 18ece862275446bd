#include "bdsim/noise.hpp"

#include <cmath>

namespace bdsim {

namespace {

constexpr uint32_t kMul0 = 0xD2511F53u;
constexpr uint32_t kMul1 = 0xCD9E8D57u;
constexpr uint32_t kBump0 = 0x9E3779B9u;
constexpr uint32_t kBump1 = 0xBB67AE85u;

inline std::array<uint32_t, 4> one_round(const std::array<uint32_t, 4>& c,
                                         const std::array<uint32_t, 2>& k) {
  uint64_t p0 = static_cast<uint64_t>(kMul0) * c[0];
  uint64_t p1 = static_cast<uint64_t>(kMul1) * c[2];
  return {static_cast<uint32_t>(p1 >> 32) ^ c[1] ^ k[0], static_cast<uint32_t>(p1),
          static_cast<uint32_t>(p0 >> 32) ^ c[3] ^ k[1], static_cast<uint32_t>(p0)};
}

// strictly inside (0,1)
inline double uniform_from(uint32_t lo, uint32_t hi) {
  uint64_t bits = (static_cast<uint64_t>(hi) << 32) | lo;
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

}  // namespace

std::array<uint32_t, 4> counter_block(const std::array<uint32_t, 4>& counter,
                                      const std::array<uint32_t, 2>& key) {
  std::array<uint32_t, 4> c = counter;
  std::array<uint32_t, 2> k = key;
  c = one_round(c, k);
  for (int r = 1; r < 10; ++r) {
    k = {k[0] + kBump0, k[1] + kBump1};
    c = one_round(c, k);
  }
  return c;
}

double NoiseSource::normal(uint64_t path, uint64_t step, uint32_t channel) const {
  std::array<uint32_t, 4> counter = {static_cast<uint32_t>(path),
                                     static_cast<uint32_t>(path >> 32),
                                     static_cast<uint32_t>(step), channel >> 1};
  std::array<uint32_t, 2> key = {static_cast<uint32_t>(seed_),
                                 static_cast<uint32_t>(seed_ >> 32)};
  // step only has 32 addressable bits per key; fold overflow into the key
  key[1] ^= static_cast<uint32_t>(step >> 32);
  auto w = counter_block(counter, key);
  double u1 = uniform_from(w[0], w[1]);
  double u2 = uniform_from(w[2], w[3]);
  double r = std::sqrt(-2.0 * std::log(u1));
  double angle = 2.0 * M_PI * u2;
  return channel % 2 == 0 ? r * std::cos(angle) : r * std::sin(angle);
}

VecA NoiseSource::normals(uint64_t path, uint64_t step, int count, uint32_t first_channel) const {
  VecA out(count);
  for (int i = 0; i < count; ++i) out[i] = normal(path, step, first_channel + i);
  return out;
}

}  // namespace bdsim
