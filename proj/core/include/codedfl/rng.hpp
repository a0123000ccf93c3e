#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace codedfl {

/// Mixes a 64-bit value (splitmix64 finalizer). Used to derive independent
/// substreams from a master seed without coupling draw order across
/// devices/epochs.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives a substream seed from a master seed and a path of tags, e.g.
/// derive_seed(latency_seed, {kEpoch, epoch, device, leg}).
inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = mix64(master);
  for (std::uint64_t p : path) s = mix64(s ^ mix64(p));
  return s;
}

// Stream tags. Values are arbitrary but fixed: changing them changes every
// seeded trace.
namespace stream {
constexpr std::uint64_t kPads = 0x70616473;
constexpr std::uint64_t kCode = 0x636f6465;
constexpr std::uint64_t kShares = 0x73686172;
constexpr std::uint64_t kEpoch = 0x65706f63;
constexpr std::uint64_t kCompute = 0x636d7074;
constexpr std::uint64_t kUpload = 0x75706c64;
constexpr std::uint64_t kDownload = 0x646f776e;
constexpr std::uint64_t kSetupPhase = 0x73657475;
constexpr std::uint64_t kEmbed = 0x656d6264;
constexpr std::uint64_t kSynth = 0x73796e74;
}  // namespace stream

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) { return Rng(mix64(seed)); }

}  // namespace codedfl
