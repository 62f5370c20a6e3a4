#pragma once

#include <cstdint>
#include <random>

namespace mfsde {

/// Documented substream indices derived from a root seed.
namespace stream {
inline constexpr std::uint64_t wiener = 0;
inline constexpr std::uint64_t fbm = 1;
inline constexpr std::uint64_t jumps = 2;
/// Replica r of an ensemble uses stream replica_base + r as its own root.
inline constexpr std::uint64_t replica_base = 3;
}  // namespace stream

using Engine = std::mt19937_64;

/// (root, stream) pair; identical pairs reproduce identical draws.
struct Seed {
  std::uint64_t root = 0;
  std::uint64_t stream = 0;

  /// 64-bit state for this substream, obtained by counter-based mixing.
  std::uint64_t derived() const;
  Engine engine() const { return Engine(derived()); }

  /// Same root, different stream.
  Seed with_stream(std::uint64_t s) const { return Seed{root, s}; }

  /// A fresh root for replica r; its own streams 0, 1, 2 feed the drivers.
  Seed replica(std::uint64_t r) const;

  bool operator==(const Seed&) const = default;
};

/// SplitMix64 finaliser.
std::uint64_t mix64(std::uint64_t x);

}  // namespace mfsde
