#pragma once

#include <cstdint>
#include <initializer_list>

namespace pedcrop {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// Stateless generator: every draw is a hash of its key, so results do not
/// depend on how many draws happened before or in which order.
constexpr std::uint64_t hash_key(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x243f6a8885a308d3ull;
  for (std::uint64_t p : parts) h = mix64(h ^ mix64(p));
  return h;
}

/// Uniform in [0, 1) with 53 random bits.
constexpr double unit_from_hash(std::uint64_t h) { return double(h >> 11) * 0x1.0p-53; }

constexpr double uniform01(std::initializer_list<std::uint64_t> key) {
  return unit_from_hash(hash_key(key));
}

}  // namespace pedcrop
