#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace privwave {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Deterministic seeded generator. The same (seed, stream) pair yields the
// same draw sequence on every platform: mt19937_64 is standard-defined and
// uniform doubles are built from the top 53 bits directly.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed, std::uint64_t stream = 0)
      : engine_(splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x51ED2701)) ) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on the open interval (0, 1); never returns an exact endpoint.
  double uniform01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
  }

  double uniform(double lo, double hi) { return lo + uniform01() * (hi - lo); }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    // Rejection-free modulo bias is negligible for the ranges used here,
    // but keep it exact anyway.
    std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

 private:
  std::mt19937_64 engine_;
};

// Stable seed derivation for experiment runs: hashes the master seed with a
// textual stream name and two indices (e.g. epsilon index, repetition).
std::uint64_t derive_seed(std::uint64_t master, std::string_view name,
                          std::uint64_t a = 0, std::uint64_t b = 0);

}  // namespace privwave
