#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace dcss {

// splitmix64 finalizer: cheap, well-mixed 64-bit hash used to derive
// independent engine seeds from (seed, tag, index) triples.
constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

// Deterministic substream engine. Every Monte-Carlo trial owns the stream
// derived from its own index, so results do not depend on scheduling or on
// how trials are partitioned across threads.
inline std::mt19937_64 substream(std::uint64_t seed, std::string_view tag,
                                 std::uint64_t index = 0) {
  const std::uint64_t mixed =
      splitmix64(seed) ^ splitmix64(fnv1a(tag)) ^
      splitmix64(index * 0x9E3779B97F4A7C15ULL + 0xD1B54A32D192ED03ULL);
  return std::mt19937_64(splitmix64(mixed));
}

}  // namespace dcss
