#pragma once

#include <cstdint>
#include <random>

namespace fsc {

// SplitMix64 step; the documented trial-splitting function.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Per-trial substream seed: trial i draws from mt19937_64 seeded with
// splitmix64 applied (i+1) times to the master seed. Trials never share an
// engine, so trial-level parallelism cannot change any stream.
inline std::uint64_t trial_seed(std::uint64_t master_seed, int trial) {
  std::uint64_t s = master_seed;
  for (int i = 0; i <= trial; ++i) s = splitmix64(s);
  return s;
}

inline std::mt19937_64 trial_engine(std::uint64_t master_seed, int trial) {
  return std::mt19937_64(trial_seed(master_seed, trial));
}

}  // namespace fsc
