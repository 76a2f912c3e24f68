#pragma once

#include <cstdint>
#include <random>

namespace ntn {

// SplitMix64 step; used to expand one user seed into independent substreams.
std::uint64_t splitmix64(std::uint64_t& state);

// Deterministic seed for substream `stream`, item `index` of a base seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index = 0);

// Thin wrapper over mt19937_64 with distribution code kept in-house so that
// draws do not depend on the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer on [0, n).
  std::uint64_t index(std::uint64_t n);

  // Standard normal via Box-Muller (no cached second value).
  double normal();

  friend bool operator==(const Rng& a, const Rng& b) { return a.engine_ == b.engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ntn
