#include "privwave/rng.hpp"

namespace privwave {

std::uint64_t derive_seed(std::uint64_t master, std::string_view name,
                          std::uint64_t a, std::uint64_t b) {
  // FNV-1a over the stream name, then splitmix whitening of each component.
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  std::uint64_t out = splitmix64(master);
  out = splitmix64(out ^ h);
  out = splitmix64(out ^ (a + 0x9E3779B97F4A7C15ULL));
  out = splitmix64(out ^ (b + 0xD1B54A32D192ED03ULL));
  return out;
}

}  // namespace privwave
