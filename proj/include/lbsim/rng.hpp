#pragma once

#include <cstdint>
#include <random>

#include "lbsim/util.hpp"

// Deterministic randomness. The engine is std::mt19937_64 (bit-exact by the
// standard on every platform); the samplers here replace std::*_distribution,
// whose outputs are implementation-defined, so streams replay identically
// across standard libraries. Every consumer derives its own stream from
// (master seed, stream tag, entity id) and owns it exclusively.

namespace lbsim {

// Fixed stream tags; add new ones at the end, never renumber.
enum : std::uint64_t {
  kStreamTrace = 1,   // per-UE mobility and demand draws
  kStreamAgent = 2,   // per-UE init, action and replay-sampling draws
  kStreamMisc = 3,    // tests and one-off tools
};

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                    std::uint64_t entity) {
  return splitmix64(splitmix64(splitmix64(master) ^ stream) ^ entity);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
  }

  // Uniform on {0 … n-1} by rejection; unbiased for every n.
  int uniform_int(int n) {
    require(n > 0, "uniform_int needs n > 0, got ", n);
    const std::uint64_t un = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % un;
    std::uint64_t x;
    do {
      x = eng_();
    } while (x >= limit);
    return static_cast<int>(x % un);
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace lbsim
