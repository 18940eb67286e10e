#pragma once

#include <cstdint>
#include <random>

namespace gcfx {

/// Deterministic stream splitting: every consumer of randomness derives its
/// own generator from (master seed, purpose tag, graph index, epoch), so
/// reordering work never perturbs another stream.
///
/// Streams are derived with splitmix64 over the concatenated words; the same
/// inputs always yield the same generator state on any platform.
namespace rng {

constexpr std::uint64_t kInitWeights = 0x01;
constexpr std::uint64_t kShuffle = 0x02;
constexpr std::uint64_t kLatentNoise = 0x03;
constexpr std::uint64_t kRegNoise = 0x04;
constexpr std::uint64_t kRandomMask = 0x05;
constexpr std::uint64_t kSynthetic = 0x06;
constexpr std::uint64_t kFolds = 0x07;
constexpr std::uint64_t kEval = 0x08;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive(std::uint64_t seed, std::uint64_t tag,
                            std::uint64_t a = 0, std::uint64_t b = 0) {
  std::uint64_t h = splitmix64(seed ^ 0x5851f42d4c957f2dULL);
  h = splitmix64(h ^ tag);
  h = splitmix64(h ^ a);
  h = splitmix64(h ^ b);
  return h;
}

inline std::mt19937_64 stream(std::uint64_t seed, std::uint64_t tag,
                              std::uint64_t a = 0, std::uint64_t b = 0) {
  return std::mt19937_64(derive(seed, tag, a, b));
}

}  // namespace rng
}  // namespace gcfx
