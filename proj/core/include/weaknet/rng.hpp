#pragma once

#include <cstdint>
#include <random>

#include "weaknet/types.hpp"

namespace weaknet {

/// splitmix64 stream element: finalizer applied to seed + index * golden gamma.
/// Used to derive independent per-agent seeds from one run seed.
[[nodiscard]] inline std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + index * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// One agent's private draw stream. Streams are derived by hashing
/// (seed, agent index), so every agent consumes only its own randomness and
/// adding observers (trace points, extra agents) never perturbs the draws of
/// existing ones. mt19937_64 and the 53-bit uniform mapping are both fully
/// specified, making traces bit-reproducible across platforms.
class AgentRng {
 public:
  AgentRng(std::uint64_t seed, std::uint64_t agent_index)
      : engine_(split_seed(seed, agent_index + 1)) {}

  /// Uniform in [0, 1) with 53 significant bits.
  [[nodiscard]] Scalar uniform01() {
    return static_cast<Scalar>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Index into a probability vector (sums to ~1); the last cell absorbs
  /// round-off.
  [[nodiscard]] Index categorical(const Vector& p) {
    const Scalar u = uniform01();
    Scalar cumulative = 0;
    for (Index i = 0; i + 1 < p.size(); ++i) {
      cumulative += p(i);
      if (u < cumulative) return i;
    }
    return p.size() - 1;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace weaknet
