#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace momf {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Counter-based seed derivation: each (master, path...) tuple maps to an
// independent stream seed, so trials and per-iteration consumers never share
// generator state.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = splitmix64(master);
  for (std::uint64_t p : path) h = splitmix64(h ^ splitmix64(p + 0x632be59bd9b4e019ULL));
  return h;
}

// Stream tags used with derive_seed.
namespace stream {
inline constexpr std::uint64_t kTrial = 1;
inline constexpr std::uint64_t kInit = 2;
inline constexpr std::uint64_t kGpFit = 3;
inline constexpr std::uint64_t kMcSamples = 4;
inline constexpr std::uint64_t kAcqPool = 5;
inline constexpr std::uint64_t kMaxValues = 6;
inline constexpr std::uint64_t kFidelityPool = 7;
inline constexpr std::uint64_t kTrace = 8;
inline constexpr std::uint64_t kOracle = 9;
}  // namespace stream

}  // namespace momf
