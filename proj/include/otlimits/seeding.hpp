#ifndef OTLIMITS_SEEDING_HPP
#define OTLIMITS_SEEDING_HPP

#include <cstdint>
#include <random>
#include <string_view>

namespace otl {

using Rng = std::mt19937_64;

/// Stable stream seed for (root, task, index): FNV-1a over the task label
/// mixed with the root and index through splitmix64. Independent of platform
/// and thread schedule.
inline std::uint64_t derive_seed(std::uint64_t root, std::string_view task,
                                 std::uint64_t index) {
  auto mix = [](std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  };
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : task) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return mix(mix(mix(root) ^ h) ^ index);
}

inline Rng make_stream(std::uint64_t root, std::string_view task, std::uint64_t index) {
  return Rng(derive_seed(root, task, index));
}

}  // namespace otl

#endif  // OTLIMITS_SEEDING_HPP
