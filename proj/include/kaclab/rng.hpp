#pragma once

#include <cstdint>
#include <random>

namespace kaclab {

using Rng = std::mt19937_64;

// splitmix64 mixing step (Steele, Lea, Flood 2014). Bijective on uint64,
// so distinct inputs give distinct outputs.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Per-replica seed: advance a splitmix stream from the base seed.
// Replica r gets mix(base + (r+1)*golden), pairwise distinct in r.
inline std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index) {
  return splitmix64(base_seed + (index + 1) * 0x9e3779b97f4a7c15ULL);
}

// Independent named substream (estimators, bootstraps, reference draws).
inline std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index,
                                 std::uint64_t stream) {
  return splitmix64(derive_seed(base_seed, index) ^ splitmix64(stream));
}

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

inline double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline double normal01(Rng& rng) {
  return std::normal_distribution<double>(0.0, 1.0)(rng);
}

// Exp(rate) waiting time.
inline double exp_time(Rng& rng, double rate) {
  return std::exponential_distribution<double>(rate)(rng);
}

// Uniform integer in [0, n).
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

}  // namespace kaclab
