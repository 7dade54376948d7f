#pragma once

// Reproducible uniform streams. Replicate r of a run with master seed s uses
// the r-th output of SplitMix64 started at s to seed its own mt19937_64, so a
// replicate's numbers do not depend on which thread runs it or when.

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "gof/distfn.hpp"

namespace gof {

inline std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t replicate_seed(std::uint64_t master_seed, std::uint64_t replicate) {
  return splitmix64_mix(master_seed + (replicate + 1) * 0x9E3779B97F4A7C15ULL);
}

class ReplicateRng {
 public:
  explicit ReplicateRng(std::uint64_t seed) : engine_(seed) {}

  // Midpoints of a 2^-53 grid, so never exactly 0 or 1.
  double uniform01() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

inline UnitSample uniform_sample(std::size_t n, std::uint64_t seed) {
  ReplicateRng rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform01();
  std::sort(v.begin(), v.end());
  return UnitSample::from_sorted(std::move(v));
}

}  // namespace gof
